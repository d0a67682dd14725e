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

// Infeasible primal-dual path following method for
//
//   min <C,X> + c'x + f'w   s.t.  A(X) + Bx + Fw = b,  X psd,  x >= 0,  w free
//
// where X is a list of Hermitian blocks and x collects nonnegative scalars and
// inequality slacks. Search direction: HKM with Mehrotra predictor-corrector.
// The free part enters the Newton system as a bordered Schur complement.

#include "starwpcn/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <optional>
#include <chrono>
#include <cmath>
#include <limits>

namespace starwpcn::sdp
{
    namespace
    {
        using Entry = TraceTerm::Entry;

        struct BlockCoef
        {
            int block = -1;
            bool dense = false;
            cmat D;
            std::vector<Entry> E;
        };

        struct Row
        {
            std::vector<BlockCoef> blocks;
            std::vector<std::pair<int, double>> lp;
            std::vector<std::pair<int, double>> fr;
            double b = 0.0;
        };

        struct ScalarSlot
        {
            bool free = false;
            int index = -1;
        };

        struct Standard
        {
            std::vector<int> dims;
            int n_lp = 0;
            int n_fr = 0;
            std::vector<Row> rows;
            std::vector<cmat> C;
            rvec c_lp;
            rvec c_fr;
            std::vector<ScalarSlot> scalar_slots;
            std::vector<int> user_row; // standard row -> user constraint index
            std::vector<double> row_scale;
            double obj_scale = 1.0;
            double b_scale = 1.0;
            double sense_sign = 1.0;
        };

        double re_trace(const BlockCoef &a, const cmat &x)
        {
            if (a.dense)
                return (a.D.conjugate().cwiseProduct(x)).sum().real();
            double s = 0.0;
            for (const auto &e : a.E)
                s += (e.value * x(e.col, e.row)).real();
            return s;
        }

        void add_scaled(cmat &out, const BlockCoef &a, double w)
        {
            if (a.dense)
                out += w * a.D;
            else
                for (const auto &e : a.E)
                    out(e.row, e.col) += w * e.value;
        }

        double coef_norm2(const BlockCoef &a)
        {
            if (a.dense)
                return a.D.squaredNorm();
            double s = 0.0;
            for (const auto &e : a.E)
                s += std::norm(e.value);
            return s;
        }

        void merge_terms(const std::vector<TraceTerm> &terms, std::vector<BlockCoef> &out, const std::vector<int> &dims)
        {
            for (const auto &t : terms)
            {
                auto it = std::find_if(out.begin(), out.end(), [&](const BlockCoef &b) { return b.block == t.var; });
                if (it == out.end())
                {
                    BlockCoef bc;
                    bc.block = t.var;
                    out.push_back(std::move(bc));
                    it = out.end() - 1;
                }
                const int n = dims[t.var];
                if (t.dense && !it->dense)
                {
                    cmat d = cmat::Zero(n, n);
                    for (const auto &e : it->E)
                        d(e.row, e.col) += e.value;
                    it->E.clear();
                    it->dense = true;
                    it->D = std::move(d);
                }
                if (it->dense)
                {
                    if (t.dense)
                        it->D += t.coeff;
                    else
                        for (const auto &e : t.entries)
                            it->D(e.row, e.col) += e.value;
                }
                else
                    it->E.insert(it->E.end(), t.entries.begin(), t.entries.end());
            }
        }

        Standard standardize(const ConicProgram &p)
        {
            Standard s;
            s.dims = p.psd_dims();
            for (int i = 0; i < p.num_scalars(); ++i)
            {
                ScalarSlot slot;
                slot.free = !p.scalar_nonnegative(i);
                slot.index = slot.free ? s.n_fr++ : s.n_lp++;
                s.scalar_slots.push_back(slot);
            }
            const auto &cons = p.constraints();
            for (std::size_t ci = 0; ci < cons.size(); ++ci)
            {
                const auto &c = cons[ci];
                Row row;
                merge_terms(c.lhs.trace_terms(), row.blocks, s.dims);
                for (const auto &st : c.lhs.scalar_terms())
                {
                    const auto &slot = s.scalar_slots[st.var];
                    (slot.free ? row.fr : row.lp).push_back({slot.index, st.coeff});
                }
                row.b = c.rhs - c.lhs.constant();
                if (c.relation == Relation::less_equal)
                    row.lp.push_back({s.n_lp++, 1.0});
                else if (c.relation == Relation::greater_equal)
                    row.lp.push_back({s.n_lp++, -1.0});
                s.rows.push_back(std::move(row));
                s.user_row.push_back(static_cast<int>(ci));
            }

            s.sense_sign = p.sense() == Sense::maximize ? -1.0 : 1.0;
            s.C.resize(s.dims.size());
            for (std::size_t b = 0; b < s.dims.size(); ++b)
                s.C[b] = cmat::Zero(s.dims[b], s.dims[b]);
            s.c_lp = rvec::Zero(s.n_lp);
            s.c_fr = rvec::Zero(s.n_fr);
            std::vector<BlockCoef> obj;
            merge_terms(p.objective().trace_terms(), obj, s.dims);
            for (const auto &bc : obj)
                add_scaled(s.C[bc.block], bc, s.sense_sign);
            for (const auto &st : p.objective().scalar_terms())
            {
                const auto &slot = s.scalar_slots[st.var];
                (slot.free ? s.c_fr : s.c_lp)(slot.index) += s.sense_sign * st.coeff;
            }
            return s;
        }

        // Row and objective normalization; returns false if a row has no
        // coefficients but a nonzero right-hand side.
        bool normalize(Standard &s, bool &trivially_infeasible)
        {
            trivially_infeasible = false;
            std::vector<Row> kept;
            std::vector<int> kept_user;
            for (std::size_t i = 0; i < s.rows.size(); ++i)
            {
                auto &r = s.rows[i];
                double n2 = 0.0;
                for (const auto &bc : r.blocks)
                    n2 += coef_norm2(bc);
                for (const auto &[j, v] : r.lp)
                    n2 += v * v;
                for (const auto &[j, v] : r.fr)
                    n2 += v * v;
                const double nrm = std::sqrt(n2);
                if (nrm == 0.0)
                {
                    if (std::abs(r.b) > 1e-12)
                        trivially_infeasible = true;
                    continue;
                }
                for (auto &bc : r.blocks)
                {
                    if (bc.dense)
                        bc.D /= nrm;
                    else
                        for (auto &e : bc.E)
                            e.value /= nrm;
                }
                for (auto &[j, v] : r.lp)
                    v /= nrm;
                for (auto &[j, v] : r.fr)
                    v /= nrm;
                r.b /= nrm;
                s.row_scale.push_back(nrm);
                kept.push_back(std::move(r));
                kept_user.push_back(s.user_row[i]);
            }
            s.rows = std::move(kept);
            s.user_row = std::move(kept_user);

            double bn = 0.0;
            for (const auto &r : s.rows)
                bn = std::max(bn, std::abs(r.b));
            s.b_scale = std::max(1.0, bn);
            for (auto &r : s.rows)
                r.b /= s.b_scale;

            double cn = s.c_lp.squaredNorm() + s.c_fr.squaredNorm();
            for (const auto &c : s.C)
                cn += c.squaredNorm();
            s.obj_scale = std::max(1.0, std::sqrt(cn));
            for (auto &c : s.C)
                c /= s.obj_scale;
            s.c_lp /= s.obj_scale;
            s.c_fr /= s.obj_scale;
            return !trivially_infeasible;
        }

        struct Iterate
        {
            std::vector<cmat> X, Z;
            rvec x, z; // LP block
            rvec w;    // free variables
            rvec y;
        };

        class Engine
        {
        public:
            explicit Engine(const Standard &s) : s_(s), m_(static_cast<int>(s.rows.size()))
            {
                by_block_.resize(s.dims.size());
                for (int i = 0; i < m_; ++i)
                    for (std::size_t t = 0; t < s.rows[i].blocks.size(); ++t)
                        by_block_[s.rows[i].blocks[t].block].push_back({i, static_cast<int>(t)});
                b_ = rvec(m_);
                for (int i = 0; i < m_; ++i)
                    b_(i) = s.rows[i].b;
                // Low-rank dense coefficients (typical of quadratic forms in
                // a beam) let the Schur complement skip the cubic products.
                factors_.resize(m_);
                for (int i = 0; i < m_; ++i)
                    for (const auto &bc : s.rows[i].blocks)
                        factors_[i].push_back(factorize(bc));
            }

            rvec apply(const std::vector<cmat> &X, const rvec &x, const rvec *w) const
            {
                rvec out = rvec::Zero(m_);
                for (int i = 0; i < m_; ++i)
                {
                    const auto &r = s_.rows[i];
                    double v = 0.0;
                    for (const auto &bc : r.blocks)
                        v += re_trace(bc, X[bc.block]);
                    for (const auto &[j, a] : r.lp)
                        v += a * x(j);
                    if (w)
                        for (const auto &[j, a] : r.fr)
                            v += a * (*w)(j);
                    out(i) = v;
                }
                return out;
            }

            void adjoint(const rvec &y, std::vector<cmat> &S, rvec &s_lp, rvec &s_fr) const
            {
                S.resize(s_.dims.size());
                for (std::size_t b = 0; b < s_.dims.size(); ++b)
                    S[b] = cmat::Zero(s_.dims[b], s_.dims[b]);
                s_lp = rvec::Zero(s_.n_lp);
                s_fr = rvec::Zero(s_.n_fr);
                for (int i = 0; i < m_; ++i)
                {
                    const auto &r = s_.rows[i];
                    for (const auto &bc : r.blocks)
                        add_scaled(S[bc.block], bc, y(i));
                    for (const auto &[j, a] : r.lp)
                        s_lp(j) += a * y(i);
                    for (const auto &[j, a] : r.fr)
                        s_fr(j) += a * y(i);
                }
            }

            rmat schur(const std::vector<cmat> &X, const std::vector<cmat> &Zinv, const rvec &x, const rvec &z) const
            {

                rmat M = rmat::Zero(m_, m_);
                for (std::size_t b = 0; b < s_.dims.size(); ++b)
                {
                    const auto &list = by_block_[b];
                    const cmat &Xb = X[b];
                    const cmat &Zi = Zinv[b];
                    for (std::size_t p = 0; p < list.size(); ++p)
                    {
                        const auto [i, ti] = list[p];
                        const auto &ai = s_.rows[i].blocks[ti];
                        const auto &fi = factors_[i][ti];
                        if (ai.dense && fi)
                        {
                            // X D Z^-1 = (X F) diag(f) (Z^-1 F)^H.
                            const cmat XF = Xb * fi->F;
                            const cmat ZF = Zi * fi->F;
                            for (std::size_t q = 0; q < list.size(); ++q)
                            {
                                const auto [j, tj] = list[q];
                                const auto &aj = s_.rows[j].blocks[tj];
                                const auto &fj = factors_[j][tj];
                                double v = 0.0;
                                if (aj.dense && fj)
                                {
                                    const cmat A1 = ZF.adjoint() * fj->F;
                                    const cmat A2 = fj->F.adjoint() * XF;
                                    for (Eigen::Index l = 0; l < A1.rows(); ++l)
                                        for (Eigen::Index k = 0; k < A1.cols(); ++k)
                                            v += fi->f(l) * fj->f(k) * (A1(l, k) * A2(k, l)).real();
                                }
                                else if (aj.dense)
                                {
                                    const cmat DX = aj.D * XF;
                                    for (Eigen::Index l = 0; l < XF.cols(); ++l)
                                        v += fi->f(l) * ZF.col(l).dot(DX.col(l)).real();
                                }
                                else
                                {
                                    for (const auto &e : aj.E)
                                    {
                                        cdouble pcr = 0.0;
                                        for (Eigen::Index l = 0; l < XF.cols(); ++l)
                                            pcr += fi->f(l) * XF(e.col, l) * std::conj(ZF(e.row, l));
                                        v += (e.value * pcr).real();
                                    }
                                }
                                M(i, j) += v;
                                if (!aj.dense)
                                    M(j, i) += v;
                            }
                        }
                        else if (ai.dense)
                        {
                            const cmat P = Xb * ai.D * Zi;
                            for (std::size_t q = 0; q < list.size(); ++q)
                            {
                                const auto [j, tj] = list[q];
                                const auto &aj = s_.rows[j].blocks[tj];
                                const double v = re_trace(aj, P);
                                M(i, j) += v;
                                if (!aj.dense)
                                    M(j, i) += v;
                            }
                        }
                        else
                        {
                            for (std::size_t q = 0; q < list.size(); ++q)
                            {
                                const auto [j, tj] = list[q];
                                const auto &aj = s_.rows[j].blocks[tj];
                                if (aj.dense)
                                    continue;
                                cdouble acc = 0.0;
                                for (const auto &e : ai.E)
                                    for (const auto &f : aj.E)
                                        acc += e.value * Xb(e.col, f.row) * f.value * Zi(f.col, e.row);
                                M(i, j) += acc.real();
                            }
                        }
                    }
                }
                if (s_.n_lp > 0)
                {
                    const rvec d = x.cwiseQuotient(z);
                    for (int i = 0; i < m_; ++i)
                        for (const auto &[k, a] : s_.rows[i].lp)
                            for (int j = i; j < m_; ++j)
                                for (const auto &[l, c] : s_.rows[j].lp)
                                    if (k == l)
                                    {
                                        M(i, j) += a * c * d(k);
                                        if (j != i)
                                            M(j, i) += a * c * d(k);
                                    }
                }
                return 0.5 * (M + M.transpose());
            }

            struct Factor
            {
                cmat F; // columns are eigenvectors
                rvec f; // matching eigenvalues
            };

            static std::optional<Factor> factorize(const BlockCoef &a)
            {
                if (!a.dense || a.D.rows() < 8)
                    return std::nullopt;
                Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (a.D + a.D.adjoint()));
                const rvec &lam = es.eigenvalues();
                const double top = lam.cwiseAbs().maxCoeff();
                std::vector<Eigen::Index> keep;
                for (Eigen::Index k = 0; k < lam.size(); ++k)
                    if (std::abs(lam(k)) > 1e-14 * top)
                        keep.push_back(k);
                if (keep.empty() || 4 * keep.size() > static_cast<std::size_t>(a.D.rows()))
                    return std::nullopt;
                Factor out;
                out.F.resize(a.D.rows(), static_cast<Eigen::Index>(keep.size()));
                out.f.resize(static_cast<Eigen::Index>(keep.size()));
                for (std::size_t k = 0; k < keep.size(); ++k)
                {
                    out.F.col(k) = es.eigenvectors().col(keep[k]);
                    out.f(k) = lam(keep[k]);
                }
                return out;
            }

            const Standard &s_;
            int m_;
            std::vector<std::vector<std::optional<Factor>>> factors_;
            std::vector<std::vector<std::pair<int, int>>> by_block_;
            rvec b_;
        };

        // Inverse Cholesky factor of a positive definite X, or nothing.
        std::optional<cmat> inverse_factor(const cmat &X)
        {
            Eigen::LLT<cmat> llt(X);
            if (llt.info() != Eigen::Success)
                return std::nullopt;
            return cmat(llt.matrixL().solve(cmat::Identity(X.rows(), X.cols())));
        }

        // Largest step in [0, inf) keeping X + a dX psd, given X = L L^H and
        // Linv = L^-1.
        double max_step(const cmat &Linv, const cmat &dX)
        {
            const cmat T = Linv.triangularView<Eigen::Lower>() * dX;
            const cmat S = T * Linv.triangularView<Eigen::Lower>().adjoint();
            Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
        }

        double max_step_lp(const rvec &x, const rvec &dx)
        {
            double a = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (dx(i) < 0.0)
                    a = std::min(a, -x(i) / dx(i));
            return a;
        }

        double inner(const std::vector<cmat> &A, const std::vector<cmat> &B)
        {
            double s = 0.0;
            for (std::size_t i = 0; i < A.size(); ++i)
                s += (A[i].conjugate().cwiseProduct(B[i])).sum().real();
            return s;
        }

        cmat herm(const cmat &a) { return 0.5 * (a + a.adjoint()); }

        // Solves [M F; F' 0][dy; dw] = [r1; r2].
        bool solve_newton(const rmat &M, const rmat &F, const rvec &r1, const rvec &r2, rvec &dy, rvec &dw)
        {
            const auto m = M.rows();
            const auto nf = F.cols();
            if (m == 0)
            {
                dy = rvec::Zero(0);
                dw = rvec::Zero(nf);
                return nf == 0;
            }
            Eigen::LLT<rmat> llt(M);
            rmat Mreg;
            const Eigen::LLT<rmat> *fac = &llt;
            Eigen::LLT<rmat> llt2;
            if (llt.info() != Eigen::Success)
            {
                const double shift = 1e-13 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
                Mreg = M;
                Mreg.diagonal().array() += shift;
                llt2.compute(Mreg);
                if (llt2.info() != Eigen::Success)
                    return false;
                fac = &llt2;
            }
            if (nf == 0)
            {
                dy = fac->solve(r1);
                dw = rvec::Zero(0);
                return dy.allFinite();
            }
            const rmat MiF = fac->solve(F);
            const rvec Mir = fac->solve(r1);
            const rmat S = F.transpose() * MiF;
            Eigen::FullPivLU<rmat> lu(S);
            dw = lu.solve(F.transpose() * Mir - r2);
            dy = Mir - MiF * dw;
            return dy.allFinite() && dw.allFinite();
        }
    }

    SolveReport solve(const ConicProgram &program, const SolverOptions &options)
    {
        const auto t_start = std::chrono::steady_clock::now();
        program.check();

        SolveReport rep;
        Standard s = standardize(program);
        bool trivially_infeasible = false;
        normalize(s, trivially_infeasible);

        auto finish = [&](SolveReport &r)
        {
            r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            return r;
        };

        auto fill_zero = [&](SolveReport &r)
        {
            r.matrices.clear();
            for (int d : program.psd_dims())
                r.matrices.push_back(cmat::Zero(d, d));
            r.scalars.assign(program.num_scalars(), 0.0);
            r.duals.assign(program.constraints().size(), 0.0);
        };

        if (trivially_infeasible)
        {
            fill_zero(rep);
            rep.status = SolveStatus::infeasible;
            return finish(rep);
        }

        Engine eng(s);
        const int m = eng.m_;
        const std::size_t nb = s.dims.size();

        rmat F = rmat::Zero(m, s.n_fr);
        for (int i = 0; i < m; ++i)
            for (const auto &[j, a] : s.rows[i].fr)
                F(i, j) += a;

        // Starting point.
        double cnorm = s.c_lp.norm();
        for (const auto &c : s.C)
            cnorm = std::max(cnorm, c.norm());
        Iterate it;
        it.X.resize(nb);
        it.Z.resize(nb);
        for (std::size_t b = 0; b < nb; ++b)
        {
            const int n = s.dims[b];
            double xi = std::max(10.0, std::sqrt(double(n)));
            double et = std::max(10.0, std::sqrt(double(n)));
            for (const auto &[i, t] : eng.by_block_[b])
            {
                const double an = std::sqrt(coef_norm2(s.rows[i].blocks[t]));
                xi = std::max(xi, n * (1.0 + std::abs(s.rows[i].b)) / (1.0 + an));
                et = std::max(et, an);
            }
            et = std::max(et, s.C[b].norm());
            it.X[b] = xi * cmat::Identity(n, n);
            it.Z[b] = et * cmat::Identity(n, n);
        }
        {
            const int n = s.n_lp;
            double xi = std::max(10.0, std::sqrt(double(std::max(n, 1))));
            double et = std::max(10.0, std::max(xi, cnorm));
            for (int i = 0; i < m; ++i)
                if (!s.rows[i].lp.empty())
                    xi = std::max(xi, (1.0 + std::abs(s.rows[i].b)));
            it.x = rvec::Constant(n, xi);
            it.z = rvec::Constant(n, et);
        }
        it.w = rvec::Zero(s.n_fr);
        it.y = rvec::Zero(m);

        double nu = s.n_lp;
        for (int d : s.dims)
            nu += d;
        nu = std::max(nu, 1.0);

        double cn_total = std::sqrt(s.c_lp.squaredNorm() + s.c_fr.squaredNorm() +
                                    [&]
                                    {
                                        double a = 0;
                                        for (const auto &c : s.C)
                                            a += c.squaredNorm();
                                        return a;
                                    }());
        const double bnorm = eng.b_.norm();

        SolveStatus status = SolveStatus::numerical_failure;
        double relp = 0.0, reld = 0.0, relg = 0.0;
        int iter = 0;
        const double tol = options.tolerance;

        std::vector<cmat> Zinv(nb), Rd(nb), AtY;
        rvec at_lp, at_fr;

        Iterate best;
        double best_worst = std::numeric_limits<double>::infinity();
        std::array<double, 3> best_res{};
        int best_iter = 0, last_progress = 0;

        for (iter = 0; iter <= options.max_iterations; ++iter)
        {
            // Residuals.
            const rvec Ax = eng.apply(it.X, it.x, &it.w);
            const rvec rp = eng.b_ - Ax;
            eng.adjoint(it.y, AtY, at_lp, at_fr);
            double rd2 = 0.0;
            for (std::size_t b = 0; b < nb; ++b)
            {
                Rd[b] = s.C[b] - it.Z[b] - AtY[b];
                rd2 += Rd[b].squaredNorm();
            }
            const rvec rd_lp = s.c_lp - it.z - at_lp;
            const rvec rf = s.c_fr - at_fr;
            rd2 += rd_lp.squaredNorm() + rf.squaredNorm();

            const double pobj = inner(s.C, it.X) + s.c_lp.dot(it.x) + s.c_fr.dot(it.w);
            const double dobj = eng.b_.dot(it.y);
            const double xz = inner(it.X, it.Z) + it.x.dot(it.z);
            const double mu = xz / nu;

            relp = rp.norm() / (1.0 + bnorm);
            reld = std::sqrt(rd2) / (1.0 + cn_total);
            relg = std::max(std::abs(xz), std::abs(pobj - dobj)) / (1.0 + std::abs(pobj) + std::abs(dobj));

            if (relp <= tol && reld <= tol && relg <= tol)
            {
                status = SolveStatus::optimal;
                break;
            }
            // Remember the least-violating iterate; near the optimum the Newton
            // system can be too ill-conditioned to push residuals below tol.
            const double worst = std::max({relp, reld, relg});
            if (worst < best_worst)
            {
                if (worst < 0.5 * best_worst)
                    last_progress = iter;
                best_worst = worst;
                best = it;
                best_res = {relp, reld, relg};
                best_iter = iter;
            }
            else if (worst <= options.acceptable_tolerance && iter - last_progress >= 8)
                break;
            // Infeasibility certificates along the iterates.
            if (dobj > 0.0)
            {
                double cert2 = 0.0;
                for (std::size_t b = 0; b < nb; ++b)
                    cert2 += (AtY[b] + it.Z[b]).squaredNorm();
                cert2 += (at_lp + it.z).squaredNorm() + at_fr.squaredNorm();
                if (std::sqrt(cert2) / dobj < tol && dobj > 1e4)
                {
                    status = SolveStatus::infeasible;
                    break;
                }
            }
            if (pobj < 0.0)
            {
                const double cert = (Ax).norm() / (-pobj);
                if (cert < tol && -pobj > 1e4)
                {
                    status = SolveStatus::unbounded;
                    break;
                }
            }
            if (iter == options.max_iterations)
                break;

            bool ok = true;
            std::vector<cmat> LXinv(nb), LZinv(nb);
            for (std::size_t b = 0; b < nb && ok; ++b)
            {
                auto lx = inverse_factor(it.X[b]);
                auto lz = inverse_factor(it.Z[b]);
                ok = lx && lz;
                if (!ok)
                    break;
                LXinv[b] = std::move(*lx);
                LZinv[b] = std::move(*lz);
                Zinv[b] = herm(LZinv[b].adjoint() * LZinv[b]);
            }
            if (!ok)
                break;

            const rmat M = eng.schur(it.X, Zinv, it.x, it.z);

            // Pieces shared by predictor and corrector.
            std::vector<cmat> XRdZi(nb);
            for (std::size_t b = 0; b < nb; ++b)
                XRdZi[b] = it.X[b] * Rd[b] * Zinv[b];
            const rvec xrdz = it.x.cwiseProduct(rd_lp).cwiseQuotient(it.z);
            const rvec zinv_lp = it.z.cwiseInverse();
            const rvec base = eng.b_ - F * it.w + eng.apply(XRdZi, xrdz, nullptr);
            const rvec a_zinv = eng.apply(Zinv, zinv_lp, nullptr);

            auto direction = [&](double sigma_mu, const std::vector<cmat> *cX, const rvec *cx, rvec &dy, rvec &dw,
                                 std::vector<cmat> &dX, std::vector<cmat> &dZ, rvec &dx, rvec &dz) -> bool
            {
                rvec rhs = base - sigma_mu * a_zinv;
                if (cX)
                    rhs += eng.apply(*cX, *cx, nullptr);
                if (!solve_newton(M, F, rhs, rf, dy, dw))
                    return false;
                std::vector<cmat> AtdY;
                rvec atd_lp, atd_fr;
                eng.adjoint(dy, AtdY, atd_lp, atd_fr);
                dX.resize(nb);
                dZ.resize(nb);
                for (std::size_t b = 0; b < nb; ++b)
                {
                    dZ[b] = herm(Rd[b] - AtdY[b]);
                    cmat t = sigma_mu * Zinv[b] - it.X[b] - it.X[b] * dZ[b] * Zinv[b];
                    if (cX)
                        t -= (*cX)[b];
                    dX[b] = herm(t);
                }
                dz = rd_lp - atd_lp;
                dx = sigma_mu * zinv_lp - it.x - it.x.cwiseProduct(dz).cwiseQuotient(it.z);
                if (cx)
                    dx -= *cx;
                return true;
            };

            auto steps = [&](const std::vector<cmat> &dX, const std::vector<cmat> &dZ, const rvec &dx, const rvec &dz,
                             double &ap, double &ad) -> bool
            {
                ap = max_step_lp(it.x, dx);
                ad = max_step_lp(it.z, dz);
                for (std::size_t b = 0; b < nb; ++b)
                {
                    ap = std::min(ap, max_step(LXinv[b], dX[b]));
                    ad = std::min(ad, max_step(LZinv[b], dZ[b]));
                }
                return true;
            };

            rvec dy, dw, dx, dz;
            std::vector<cmat> dX, dZ;
            if (!direction(0.0, nullptr, nullptr, dy, dw, dX, dZ, dx, dz))
                break;
            double ap = 0.0, ad = 0.0;
            if (!steps(dX, dZ, dx, dz, ap, ad))
                break;
            ap = std::min(1.0, ap);
            ad = std::min(1.0, ad);

            double xz_aff = 0.0;
            for (std::size_t b = 0; b < nb; ++b)
                xz_aff += ((it.X[b] + ap * dX[b]).conjugate().cwiseProduct(it.Z[b] + ad * dZ[b])).sum().real();
            xz_aff += (it.x + ap * dx).dot(it.z + ad * dz);
            const double mu_aff = xz_aff / nu;
            double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
            sigma = std::clamp(sigma, 0.0, 1.0);

            std::vector<cmat> corr(nb);
            for (std::size_t b = 0; b < nb; ++b)
                corr[b] = dX[b] * dZ[b] * Zinv[b];
            const rvec corr_lp = dx.cwiseProduct(dz).cwiseQuotient(it.z);

            if (!direction(sigma * mu, &corr, &corr_lp, dy, dw, dX, dZ, dx, dz))
                break;
            if (!steps(dX, dZ, dx, dz, ap, ad))
                break;
            const double gamma = 0.9 + 0.09 * std::min(std::min(ap, ad), 1.0);
            ap = std::min(1.0, gamma * ap);
            ad = std::min(1.0, gamma * ad);
            if (ap < 1e-12 && ad < 1e-12)
                break;

            for (std::size_t b = 0; b < nb; ++b)
            {
                it.X[b] = herm(it.X[b] + ap * dX[b]);
                it.Z[b] = herm(it.Z[b] + ad * dZ[b]);
            }
            it.x += ap * dx;
            it.w += ap * dw;
            it.z += ad * dz;
            it.y += ad * dy;
            if (!it.y.allFinite() || !it.w.allFinite())
                break;
        }

        if (status == SolveStatus::numerical_failure && best_worst <= options.acceptable_tolerance)
        {
            it = std::move(best);
            relp = best_res[0];
            reld = best_res[1];
            relg = best_res[2];
            status = SolveStatus::optimal;
            rep.reduced_accuracy = true;
            iter = std::max(iter, best_iter);
        }
        rep.status = status;
        rep.iterations = iter;
        rep.primal_infeasibility = relp;
        rep.dual_infeasibility = reld;
        rep.relative_gap = relg;

        rep.matrices.resize(nb);
        for (std::size_t b = 0; b < nb; ++b)
            rep.matrices[b] = s.b_scale * it.X[b];
        rep.scalars.assign(program.num_scalars(), 0.0);
        for (int i = 0; i < program.num_scalars(); ++i)
        {
            const auto &slot = s.scalar_slots[i];
            rep.scalars[i] = s.b_scale * (slot.free ? it.w(slot.index) : it.x(slot.index));
        }
        rep.duals.assign(program.constraints().size(), 0.0);
        for (int i = 0; i < m; ++i)
            rep.duals[s.user_row[i]] = -s.sense_sign * s.obj_scale * it.y(i) / s.row_scale[i];
        rep.objective = rep.evaluate(program.objective());
        rep.dual_objective =
            s.sense_sign * s.obj_scale * s.b_scale * eng.b_.dot(it.y) + program.objective().constant();
        return finish(rep);
    }
}
