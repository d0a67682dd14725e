// SPDX-License-Identifier: Apache-2.0
//
// starwpcn: max-min throughput optimization for STAR-RIS assisted WPCNs
// Copyright (C) 2026 starwpcn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "starwpcn/sdp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace starwpcn::sdp
{
    RankOneResidual rank_one_residual(const cmat &x)
    {
        if (x.rows() != x.cols())
            throw StructureError("rank_one_residual expects a square matrix");
        RankOneResidual r;
        if (x.size() == 0)
        {
            r.zero_matrix = true;
            return r;
        }
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
        const rvec s = es.eigenvalues().cwiseAbs();
        const double spectral = s.maxCoeff();
        const double nuclear = s.sum();
        if (!(spectral > 0.0) || spectral <= 1e-300)
        {
            r.zero_matrix = true;
            return r;
        }
        r.absolute = nuclear - spectral;
        r.value = r.absolute / spectral;
        return r;
    }

    cvec extract_vector(const cmat &x, bool anchor_last_entry, double threshold)
    {
        const auto res = rank_one_residual(x);
        if (res.zero_matrix)
            throw SolverError("extract_vector: zero matrix has no dominant direction");
        if (res.value > threshold)
        {
            std::ostringstream os;
            os << "extract_vector: rank-one residual " << res.value << " exceeds " << threshold;
            throw SolverError(os.str());
        }
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()));
        const auto n = x.rows();
        const double top = es.eigenvalues()(n - 1);
        cvec v = std::sqrt(std::max(top, 0.0)) * es.eigenvectors().col(n - 1);
        if (anchor_last_entry)
        {
            const cdouble last = v(n - 1);
            if (std::abs(last) <= 1e-12 * std::max(1.0, v.norm()))
                throw SolverError("extract_vector: last entry vanishes, cannot anchor");
            v /= last;
            v(n - 1) = 1.0;
        }
        return v;
    }

    GaussianSampler::GaussianSampler(const cmat &x)
    {
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()));
        // Eigenvalues at roundoff level are dropped so that rank-deficient
        // inputs produce draws exactly inside their range.
        const double floor = 1e-12 * std::max(0.0, es.eigenvalues().maxCoeff());
        rvec lam = es.eigenvalues();
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            lam(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
        factor_ = es.eigenvectors() * lam.cast<cdouble>().asDiagonal();
    }

    cvec GaussianSampler::draw(Rng &rng) const
    {
        cvec xi(factor_.cols());
        for (Eigen::Index i = 0; i < xi.size(); ++i)
            xi(i) = rng.complex_normal();
        return factor_ * xi;
    }

    RandomizationResult gaussian_randomize(const cmat &x, int draws, const Projector &projector, const Scorer &scorer,
                                           std::uint64_t seed)
    {
        if (draws < 1)
            throw DomainError("gaussian_randomize: draws must be positive");
        RandomizationResult out;
        bool have = false;
        auto consider = [&](const cvec &candidate)
        {
            const auto p = projector(candidate);
            if (!p)
                return;
            const double sc = scorer(*p);
            if (!std::isfinite(sc))
                return;
            ++out.feasible_draws;
            if (!have || sc > out.score)
            {
                out.best = *p;
                out.score = sc;
                have = true;
            }
        };

        // The principal direction is always a candidate, so a rank-one input
        // returns its own projection.
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()));
        const auto n = x.rows();
        consider(std::sqrt(std::max(es.eigenvalues()(n - 1), 0.0)) * es.eigenvectors().col(n - 1));

        GaussianSampler sampler(x);
        Rng rng(seed);
        for (int d = 0; d < draws; ++d)
            consider(sampler.draw(rng));
        if (!have)
            throw SolverError("gaussian_randomize: no candidate survived projection");
        return out;
    }

    std::optional<cvec> project_unit_modulus(const cvec &x)
    {
        if (x.size() == 0)
            return std::nullopt;
        const double scale = x.cwiseAbs().maxCoeff();
        if (!(scale > 0.0))
            return std::nullopt;
        cvec out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            const double a = std::abs(x(i));
            if (a <= 1e-12 * scale)
                return std::nullopt;
            out(i) = x(i) / a;
        }
        out *= std::conj(out(x.size() - 1));
        out(x.size() - 1) = 1.0;
        return out;
    }
}
