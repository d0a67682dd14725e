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


#include "starwpcn/ts_tdma.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace starwpcn::ts
{
    namespace
    {
        // Total time per unit of rate at slot ratio rho = tau0 / tau1.
        double time_per_bit(double a, double rho) { return (1.0 + rho) * std::log(2.0) / std::log1p(a * rho); }

        sdp::SolveReport solve_with_retry(const sdp::ConicProgram &p, double tolerance)
        {
            auto r = sdp::solve(p, {tolerance, 120});
            if (!r.ok() && r.status == sdp::SolveStatus::numerical_failure)
                r = sdp::solve(p, {std::max(tolerance, 1e-6), 200});
            return r;
        }
    }

    Beamformers mrt_beamformers(const std::vector<cmat> &Gk, const std::vector<cvec> &u_tilde,
                                const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde,
                                const std::vector<double> &P)
    {
        const std::size_t K = Gk.size();
        if (Hk.size() != K || u_tilde.size() != K || q_tilde.size() != K || P.size() != K)
            throw StructureError("mrt_beamformers: per-user inputs must match");
        Beamformers b;
        for (std::size_t k = 0; k < K; ++k)
        {
            if (u_tilde[k].size() != Gk[k].rows() || q_tilde[k].size() != Hk[k].cols())
                throw StructureError("mrt_beamformers: dimension mismatch");
            if (P[k] < 0.0)
                throw DomainError("mrt_beamformers: negative power");
            const cvec d = Gk[k].adjoint() * u_tilde[k];
            const cvec u = Hk[k] * q_tilde[k];
            if (d.norm() == 0.0 || u.norm() == 0.0)
                throw SolverError("mrt_beamformers: effective channel of user " + std::to_string(k) + " vanishes");
            b.v.push_back(std::sqrt(P[k]) * d / d.norm());
            b.w.push_back(u / u.norm());
        }
        return b;
    }

    PassiveResult solve_ts_passive(const cmat &gram, const PassiveOptions &options)
    {
        const auto n = gram.rows();
        if (n < 1 || gram.cols() != n)
            throw StructureError("solve_ts_passive: square Gram matrix required");
        const cmat R = 0.5 * (gram + gram.adjoint());
        auto score = [&](const cvec &x) { return (x.adjoint() * R * x)(0, 0).real(); };
        PassiveResult out;
        if (n == 1)
        {
            out.vector = cvec::Ones(1);
            out.value = score(out.vector);
            out.relaxation_bound = out.value;
            out.closed_form = true;
            return out;
        }

        Eigen::SelfAdjointEigenSolver<cmat> es(R);
        const double top = es.eigenvalues()(n - 1);
        const double rest = es.eigenvalues().head(n - 1).cwiseAbs().sum();
        if (rest <= 1e-12 * std::max(top, 1e-300))
        {
            // R = g g^H: |g^H x| is maximized by aligning every phase with g.
            const cvec g = es.eigenvectors().col(n - 1);
            const auto x = sdp::project_unit_modulus(g);
            if (x)
            {
                out.vector = *x;
                out.value = score(*x);
                out.relaxation_bound = top * std::pow(g.cwiseAbs().sum(), 2.0);
                out.closed_form = true;
                return out;
            }
        }

        sdp::ConicProgram p;
        auto U = p.add_psd("U", static_cast<int>(n));
        // Scale the objective so the program is well conditioned.
        const double scale = std::max(R.norm(), 1e-300);
        p.set_objective(sdp::LinearExpr().add_trace(U, R / scale));
        for (int m = 0; m < n; ++m)
            p.add_constraint(sdp::LinearExpr().add_diag(U, m), sdp::Relation::equal, 1.0);
        const auto rep = solve_with_retry(p, options.tolerance);
        out.status = rep.status;
        out.solver_iterations = rep.iterations;
        if (!rep.ok())
            throw SolverError(std::string("solve_ts_passive: relaxation ") + sdp::to_string(rep.status));
        out.relaxation_bound = std::max(rep.objective, rep.dual_objective) * scale;
        const auto g = sdp::gaussian_randomize(rep.value(U), options.draws, sdp::project_unit_modulus, score,
                                               options.seed);
        out.vector = g.best;
        out.value = g.score;
        return out;
    }

    TimeSplit min_total_time(double a, double gamma)
    {
        if (!(gamma >= 0.0))
            throw DomainError("min_total_time: gamma must be >= 0");
        if (!(a > 0.0))
            throw DomainError("min_total_time: gain must be positive");
        if (gamma == 0.0)
            return {};

        // Coarse scan in log(rho) to bracket the minimum; the per-bit time is
        // quasi-convex in rho, which the scan verifies.
        const double lo_t = std::log(1e-12), hi_t = std::log(1e12);
        const int steps = 96;
        std::vector<double> ts(steps + 1), fs(steps + 1);
        int best = 0;
        for (int i = 0; i <= steps; ++i)
        {
            ts[i] = lo_t + (hi_t - lo_t) * i / steps;
            fs[i] = time_per_bit(a, std::exp(ts[i]));
            if (fs[i] < fs[best])
                best = i;
        }
        for (int i = 1; i <= best; ++i)
            if (fs[i] > fs[i - 1] * (1.0 + 1e-12))
                throw SolverError("min_total_time: objective not unimodal in the slot ratio");
        for (int i = best + 1; i <= steps; ++i)
            if (fs[i] < fs[i - 1] * (1.0 - 1e-12))
                throw SolverError("min_total_time: objective not unimodal in the slot ratio");

        double x0 = ts[std::max(best - 1, 0)], x3 = ts[std::min(best + 1, steps)];
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = x3 - r * (x3 - x0), x2 = x0 + r * (x3 - x0);
        double f1 = time_per_bit(a, std::exp(x1)), f2 = time_per_bit(a, std::exp(x2));
        while (x3 - x0 > 1e-12)
        {
            if (f1 < f2)
            {
                x3 = x2;
                x2 = x1;
                f2 = f1;
                x1 = x3 - r * (x3 - x0);
                f1 = time_per_bit(a, std::exp(x1));
            }
            else
            {
                x0 = x1;
                x1 = x2;
                f1 = f2;
                x2 = x0 + r * (x3 - x0);
                f2 = time_per_bit(a, std::exp(x2));
            }
        }
        const double rho = std::exp(0.5 * (x0 + x3));
        TimeSplit out;
        out.tau1 = gamma * std::log(2.0) / std::log1p(a * rho);
        out.tau0 = rho * out.tau1;
        out.total = out.tau0 + out.tau1;
        return out;
    }

    TimeAllocation solve_time_allocation(const std::vector<double> &a, double T)
    {
        if (a.empty())
            throw StructureError("solve_time_allocation: no users");
        if (!(T > 0.0))
            throw DomainError("solve_time_allocation: T must be positive");
        const std::size_t K = a.size();
        TimeAllocation out;
        if (std::any_of(a.begin(), a.end(), [](double x) { return !(x > 0.0); }))
        {
            // A starved user pins the max-min value at zero; any split works.
            out.tau0.assign(K, 0.5 * T / K);
            out.tau1.assign(K, 0.5 * T / K);
            out.gamma = 0.0;
            return out;
        }
        auto total = [&](double g)
        {
            double s = 0.0;
            for (double ak : a)
                s += min_total_time(ak, g).total;
            return s;
        };
        double lo = 0.0, hi = 1.0;
        while (total(hi) <= T)
        {
            lo = hi;
            hi *= 2.0;
        }
        int steps = 0;
        while (hi - lo > 1e-12 * std::max(1.0, hi) && steps < 200)
        {
            const double mid = 0.5 * (lo + hi);
            (total(mid) <= T ? lo : hi) = mid;
            ++steps;
        }
        out.bisection_steps = steps;
        std::vector<TimeSplit> split;
        double used = 0.0;
        for (double ak : a)
        {
            split.push_back(min_total_time(ak, lo));
            used += split.back().total;
        }
        // Hand the leftover time to every user in proportion; ratios (and so
        // the rate per unit time) are unchanged, so all rates scale equally.
        const double s = used > 0.0 ? T / used : 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            out.tau0.push_back(split[k].tau0 * s);
            out.tau1.push_back(split[k].tau1 * s);
        }
        // Close the budget exactly against rounding.
        const double sum = std::accumulate(out.tau0.begin(), out.tau0.end(), 0.0) +
                           std::accumulate(out.tau1.begin(), out.tau1.end(), 0.0);
        out.tau1[K - 1] += T - sum;
        out.gamma = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k)
        {
            const double rk = out.tau1[k] * std::log1p(a[k] * out.tau0[k] / out.tau1[k]) / std::log(2.0);
            out.gamma = std::min(out.gamma, rk);
        }
        return out;
    }

    double effective_gain(const cmat &Gk, const cvec &u_tilde, const cmat &Hk, const cvec &q_tilde, double P,
                          double eta, double sigma2)
    {
        return eta * P * (Gk.adjoint() * u_tilde).squaredNorm() * (Hk * q_tilde).squaredNorm() / sigma2;
    }

    TsResult algorithm2(const Scenario &s, const TsConfig &config)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const int K = s.n_users();
        const int M = s.n_elements();
        const auto &P = s.params;
        TsResult res;
        auto &x = res.solution;

        std::vector<cvec> ut, qt;
        for (int k = 0; k < K; ++k)
        {
            PassiveOptions o;
            o.draws = config.draws;
            o.tolerance = config.tolerance;
            o.seed = mix_seed(config.seed, 2 * static_cast<std::uint64_t>(k));
            const cmat &G = s.combined.Gk[k];
            const cmat &H = s.combined.Hk[k];
            res.downlink.push_back(solve_ts_passive(G * G.adjoint(), o));
            o.seed = mix_seed(config.seed, 2 * static_cast<std::uint64_t>(k) + 1);
            res.uplink.push_back(solve_ts_passive(H.adjoint() * H, o));
            ut.push_back(res.downlink.back().vector);
            qt.push_back(res.uplink.back().vector);
            x.profile.u.push_back(ut.back().head(M));
            x.profile.q.push_back(qt.back().head(M));
        }

        // Every slot uses the full budget at the optimum.
        x.P.assign(K, P.P_A);
        for (int k = 0; k < K; ++k)
        {
            const cmat &G = s.combined.Gk[k];
            const cmat &H = s.combined.Hk[k];
            // A user cut off from the HAP gets zero gain from any beam.
            const bool dead = (G.adjoint() * ut[k]).norm() == 0.0 || (H * qt[k]).norm() == 0.0;
            if (dead)
            {
                x.v.push_back(std::sqrt(P.P_A) * cvec::Unit(s.n_antennas(), 0));
                x.w.push_back(cvec::Unit(s.n_antennas(), 0));
                continue;
            }
            const auto bf = mrt_beamformers({G}, {ut[k]}, {H}, {qt[k]}, {P.P_A});
            x.v.push_back(bf.v[0]);
            x.w.push_back(bf.w[0]);
        }
        for (int k = 0; k < K; ++k)
            res.gains.push_back(effective_gain(s.combined.Gk[k], ut[k], s.combined.Hk[k], qt[k], P.P_A, P.eta, P.sigma2));

        const auto alloc = solve_time_allocation(res.gains, P.T);
        x.tau0 = alloc.tau0;
        x.tau1 = alloc.tau1;
        const auto energy = energy_ts(x.tau0, P.eta, s.combined, ut, x.v);
        for (int k = 0; k < K; ++k)
            x.p.push_back(x.tau1[k] > 0.0 ? energy[k] / x.tau1[k] : 0.0);
        const auto rates = rates_ts(x.tau1, x.p, x.w, s.combined.Hk, qt, P.sigma2);
        x.gamma = *std::min_element(rates.begin(), rates.end());
        res.report = validate(x, s);
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }
}
