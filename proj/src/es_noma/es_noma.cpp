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


#include "starwpcn/es_noma.hpp"

#include "log_cuts.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

namespace starwpcn::es
{
    using detail::Affine;
    using detail::LogConstraint;

    namespace
    {
        constexpr double inv_ln2 = 1.4426950408889634;

        bool has_surface(const Scenario &s) { return s.surface != SurfaceKind::none && s.n_elements() > 0; }
        bool shared_surface(const Scenario &s) { return s.surface == SurfaceKind::reflect_only; }

        std::vector<double> harvested(const BcdState &st, const Scenario &sc)
        {
            return energy_es(st.tau0, sc.params.eta, sc.combined, st.u_tilde, st.v);
        }

        EsGains gains_of(const BcdState &st, const Scenario &sc) { return es_gains(st.w, sc.combined.Hk, st.q_tilde); }

        cvec dominant_vector(const cmat &x)
        {
            Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()));
            return es.eigenvectors().col(x.rows() - 1);
        }

        // Per element, rescales (u_t,m, u_r,m) to unit total power keeping
        // the phases; an element with no power in either is split evenly.
        void restore_split(cvec &ut, cvec &ur)
        {
            const auto n = ut.size();
            for (Eigen::Index m = 0; m + 1 < n; ++m)
            {
                const double a = std::norm(ut(m)) + std::norm(ur(m));
                if (a <= 1e-24)
                {
                    ut(m) = ur(m) = std::sqrt(0.5);
                    continue;
                }
                const double s = 1.0 / std::sqrt(a);
                ut(m) *= s;
                ur(m) *= s;
            }
            ut(n - 1) = 1.0;
            ur(n - 1) = 1.0;
        }

        std::optional<cvec> anchor(const cvec &x)
        {
            const auto n = x.size();
            const double scale = x.cwiseAbs().maxCoeff();
            if (!(scale > 0.0) || std::abs(x(n - 1)) <= 1e-12 * scale)
                return std::nullopt;
            cvec y = x / x(n - 1);
            y(n - 1) = 1.0;
            return y;
        }

        // Candidate surface vectors (one per user) from a stacked draw.
        std::optional<std::vector<cvec>> project_surface(const cvec &x, int n, bool shared)
        {
            if (shared)
            {
                auto y = sdp::project_unit_modulus(x);
                if (!y)
                    return std::nullopt;
                return std::vector<cvec>{*y, *y};
            }
            auto ut = anchor(x.head(n));
            auto ur = anchor(x.tail(n));
            if (!ut || !ur)
                return std::nullopt;
            restore_split(*ut, *ur);
            return std::vector<cvec>{*ut, *ur};
        }

        cvec stack(const std::vector<cvec> &v, bool shared)
        {
            if (shared)
                return v[0];
            cvec s(v[0].size() + v[1].size());
            s << v[0], v[1];
            return s;
        }

        double rate_t(double tau1, double pt, const EsGains &g, double sigma2)
        {
            return tau1 * std::log2(1.0 + pt * g.tt / sigma2);
        }

        // Surface constraints on the lifted passive matrices.
        std::vector<sdp::MatrixVar> add_surface(sdp::ConicProgram &p, int n, bool shared, const std::string &name)
        {
            std::vector<sdp::MatrixVar> X;
            if (shared)
            {
                X.push_back(p.add_psd(name, n));
                for (int m = 0; m < n; ++m)
                    p.add_constraint(sdp::LinearExpr().add_diag(X[0], m), sdp::Relation::equal, 1.0, "unit modulus");
                return X;
            }
            X.push_back(p.add_psd(name + "_t", n));
            X.push_back(p.add_psd(name + "_r", n));
            for (int m = 0; m + 1 < n; ++m)
                p.add_constraint(sdp::LinearExpr().add_diag(X[0], m).add_diag(X[1], m), sdp::Relation::equal, 1.0,
                                 "amplitude split");
            for (int k = 0; k < 2; ++k)
                p.add_constraint(sdp::LinearExpr().add_diag(X[k], n - 1), sdp::Relation::equal, 1.0, "anchor");
            return X;
        }

        const sdp::MatrixVar &surface_of(const std::vector<sdp::MatrixVar> &X, int k)
        {
            return X.size() == 1 ? X[0] : X[k];
        }

        // R_t and the power-linearized R_r bound in scaled powers
        // p_k = scale * x_k.
        void add_rate_logs(std::vector<LogConstraint> &logs, BcdState &st, sdp::ScalarVar xt, sdp::ScalarVar xr,
                           sdp::ScalarVar gamma, double scale, const EsGains &g, double sigma2)
        {
            LogConstraint lt;
            lt.argument.add(1.0).scalar(xt, scale * g.tt / sigma2);
            lt.bound.scalar(gamma, 1.0);
            lt.weight = st.tau1;
            lt.points = &st.cuts_t;
            lt.label = "rate t";
            logs.push_back(lt);

            const double y0 = 1.0 + st.pt_local * g.rt / sigma2;
            const double slope = (g.rt / sigma2) * inv_ln2 / y0;
            LogConstraint lr;
            lr.argument.add(1.0).scalar(xr, scale * g.rr / sigma2).scalar(xt, scale * g.rt / sigma2);
            lr.bound.scalar(gamma, 1.0)
                .scalar(xt, st.tau1 * slope * scale)
                .add(st.tau1 * (std::log2(y0) - slope * st.pt_local));
            lr.weight = st.tau1;
            lr.points = &st.cuts_r;
            lr.label = "rate r bound";
            logs.push_back(lr);
        }

        void prepare_cuts(BcdState &st, const EsGains &g, double sigma2)
        {
            detail::select_points(st.cuts_t, 1.0 + st.p[user_t] * g.tt / sigma2);
            detail::select_points(st.cuts_r, 1.0 + (st.p[user_r] * g.rr + st.p[user_t] * g.rt) / sigma2);
        }

        TraceRecord start_record(const BcdState &st, Block b)
        {
            TraceRecord r;
            r.tau0 = st.tau0;
            r.iteration = st.iteration;
            r.block = b;
            r.gamma = st.gamma;
            r.candidate_gamma = st.gamma;
            return r;
        }

        // Monotone acceptance: the proposal replaces the iterate only if the
        // exact min rate does not drop.
        void settle(TraceRecord &rec, BcdState &st, BcdState &&candidate)
        {
            rec.candidate_gamma = candidate.gamma;
            if (candidate.gamma >= st.gamma)
            {
                st = std::move(candidate);
                rec.accepted = true;
            }
            else
            {
                rec.accepted = false;
                if (!rec.note.empty())
                    rec.note += "; ";
                rec.note += "proposal lowers gamma, kept previous iterate";
            }
            rec.gamma = st.gamma;
        }

        bool within_bound(double score, double bound)
        {
            return !std::isfinite(score) || score <= bound + 1e-7 * (1.0 + std::abs(bound));
        }

        using Builder = std::function<void(sdp::ConicProgram &, std::vector<sdp::MatrixVar> &, sdp::ScalarVar &,
                                           std::vector<LogConstraint> &)>;
        using VectorScore = std::function<double(const std::vector<cvec> &)>;

        struct PassiveOutcome
        {
            std::optional<std::vector<cvec>> vectors;
            double bound = 0.0;
            double score = 0.0;
            double residual = 0.0;
            double penalty = 0.0;
            int rounds = 0;
            bool converged = true;
            int solves = 0;
            int cut_rounds = 0;
            double time = 0.0;
            std::string note;
        };

        // Penalty loop (or one relaxation plus randomization) shared by the
        // two passive blocks.
        PassiveOutcome run_passive(const Scenario &sc, const EsConfig &cfg, const Builder &build,
                                   const VectorScore &score, std::uint64_t seed)
        {
            const int n = sc.n_elements() + 1;
            const bool shared = shared_surface(sc);
            PassiveOutcome out;
            double xi = 0.0;
            std::vector<cvec> phi;
            std::vector<cmat> Xv;
            for (int round = 0;; ++round)
            {
                sdp::ConicProgram p;
                std::vector<sdp::MatrixVar> X;
                sdp::ScalarVar gamma;
                std::vector<LogConstraint> logs;
                build(p, X, gamma, logs);
                sdp::LinearExpr obj;
                obj.add_scalar(gamma, 1.0);
                if (xi > 0.0)
                    for (std::size_t k = 0; k < X.size(); ++k)
                        obj.add_trace(X[k], -xi * (cmat::Identity(n, n) - phi[k] * phi[k].adjoint()));
                p.set_objective(obj);

                const auto cs = detail::solve_with_cuts(p, logs, cfg.solver_tolerance, cfg.max_cut_rounds);
                out.solves += cs.solves;
                out.cut_rounds += cs.rounds;
                out.time += cs.solver_time;
                if (round == 0)
                    out.bound = std::max(cs.report.value(gamma), cs.report.dual_objective);

                Xv.clear();
                out.residual = 0.0;
                for (const auto &x : X)
                {
                    Xv.push_back(cs.report.value(x));
                    out.residual = std::max(out.residual, sdp::rank_one_residual(Xv.back()).absolute);
                }
                out.rounds = round;
                out.penalty = xi;
                if (cfg.passive == PassiveMethod::randomization)
                    break;
                if (out.residual <= cfg.penalty_tolerance)
                {
                    out.converged = true;
                    break;
                }
                if (round >= cfg.max_penalty_rounds)
                {
                    out.converged = false;
                    out.note = "penalty loop stopped before reaching rank one";
                    break;
                }
                phi.clear();
                for (const auto &x : Xv)
                    phi.push_back(dominant_vector(x));
                xi = round == 0 ? cfg.penalty_initial : std::min(xi * cfg.penalty_growth, cfg.penalty_cap);
            }

            if (cfg.passive == PassiveMethod::randomization)
            {
                cmat lifted = cmat::Zero(shared ? n : 2 * n, shared ? n : 2 * n);
                for (std::size_t k = 0; k < Xv.size(); ++k)
                    lifted.block(k * n, k * n, n, n) = Xv[k];
                auto projector = [&](const cvec &x) -> std::optional<cvec>
                {
                    auto v = project_surface(x, n, shared);
                    if (!v)
                        return std::nullopt;
                    return stack(*v, shared);
                };
                auto scorer = [&](const cvec &x)
                {
                    const auto v = project_surface(x, n, shared);
                    return score(*v);
                };
                try
                {
                    const auto r = sdp::gaussian_randomize(lifted, cfg.draws, projector, scorer, seed);
                    out.vectors = project_surface(r.best, n, shared);
                    out.score = r.score;
                }
                catch (const SolverError &e)
                {
                    out.note = e.what();
                }
                return out;
            }

            std::vector<cvec> vectors;
            try
            {
                for (const auto &x : Xv)
                    vectors.push_back(sdp::extract_vector(x, true, std::numeric_limits<double>::infinity()));
            }
            catch (const SolverError &e)
            {
                out.note = e.what();
                return out;
            }
            if (shared)
            {
                const auto u = sdp::project_unit_modulus(vectors[0]);
                if (!u)
                {
                    out.note = "extracted vector has a vanishing entry";
                    return out;
                }
                vectors = {*u, *u};
            }
            else
                restore_split(vectors[0], vectors[1]);
            out.score = score(vectors);
            out.vectors = vectors;
            return out;
        }

        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    }

    void EsConfig::validate() const
    {
        if (!(tau_step > 0.0 && tau_step < 1.0))
            throw DomainError("EsConfig: tau_step must lie in (0, 1)");
        if (!(inner_tolerance > 0.0) || !(penalty_tolerance > 0.0) || !(solver_tolerance > 0.0))
            throw DomainError("EsConfig: tolerances must be positive");
        if (!(penalty_growth > 1.0))
            throw DomainError("EsConfig: penalty growth factor must exceed 1");
        if (!(penalty_initial > 0.0) || !(penalty_cap >= penalty_initial))
            throw DomainError("EsConfig: penalty range is empty");
        if (max_inner_iterations < 1 || max_penalty_rounds < 0 || max_cut_rounds < 1 || draws < 1)
            throw DomainError("EsConfig: iteration limits must be positive");
    }

    const char *to_string(Block b)
    {
        switch (b)
        {
        case Block::receivers:
            return "receivers";
        case Block::energy:
            return "energy";
        case Block::downlink:
            return "downlink";
        case Block::uplink:
            return "uplink";
        }
        return "?";
    }

    std::array<cvec, 2> mmse_receivers(const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde,
                                       const std::vector<double> &p, double sigma2)
    {
        if (Hk.size() != 2 || q_tilde.size() != 2 || p.size() != 2)
            throw StructureError("mmse_receivers: exactly two users");
        if (!(sigma2 > 0.0))
            throw DomainError("mmse_receivers: noise power must be positive");
        if (p[0] < 0.0 || p[1] < 0.0)
            throw DomainError("mmse_receivers: powers must be >= 0");
        const cvec ht = Hk[user_t] * q_tilde[user_t];
        const cvec hr = Hk[user_r] * q_tilde[user_r];
        const auto N = ht.size();
        // Both forms are the closed forms multiplied through by the user's
        // power, which keeps them defined at zero power.
        const cmat It = cmat::Identity(N, N) + (p[user_t] / sigma2) * ht * ht.adjoint();
        const cmat Ir = It + (p[user_r] / sigma2) * hr * hr.adjoint();
        std::array<cvec, 2> w;
        w[user_t] = It.llt().solve(ht);
        w[user_r] = Ir.llt().solve(hr);
        for (auto &x : w)
        {
            const double nrm = x.norm();
            if (nrm > 0.0)
                x /= nrm;
            else
                x = cvec::Unit(N, 0);
        }
        return w;
    }

    double rate_r_power_bound(double tau1, double pt, double pr, const EsGains &g, double sigma2, double pt_local)
    {
        const double x = 1.0 + (pr * g.rr + pt * g.rt) / sigma2;
        const double y0 = 1.0 + pt_local * g.rt / sigma2;
        return tau1 * (std::log2(x) - std::log2(y0) - (g.rt / sigma2) * (pt - pt_local) * inv_ln2 / y0);
    }

    double rate_r_auxiliary_bound(double tau1, double A, double B, double A0, double B0)
    {
        const double d = 1.0 + A0 * B0;
        return tau1 * (std::log2(1.0 + 1.0 / (A0 * B0)) - inv_ln2 * (A - A0) / (A0 * d) - inv_ln2 * (B - B0) / (B0 * d));
    }

    double surrogate_gamma(const std::vector<double> &energy, double tau1, const EsGains &g, double sigma2,
                           double pt_local)
    {
        if (energy.size() != 2)
            throw StructureError("surrogate_gamma: exactly two users");
        if (!(tau1 > 0.0))
            return 0.0;
        const double pr = std::max(0.0, energy[user_r]) / tau1;
        const double cap = std::max(0.0, energy[user_t]) / tau1;
        // Both pieces are concave in p_t, so is their minimum.
        auto h = [&](double pt)
        { return std::min(rate_t(tau1, pt, g, sigma2), rate_r_power_bound(tau1, pt, pr, g, sigma2, pt_local)); };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 0.0, b = cap;
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double hc = h(c), hd = h(d);
        for (int i = 0; i < 200 && b - a > 1e-15 * cap; ++i)
        {
            if (hc < hd)
            {
                a = c;
                c = d;
                hc = hd;
                d = a + phi * (b - a);
                hd = h(d);
            }
            else
            {
                b = d;
                d = c;
                hd = hc;
                c = b - phi * (b - a);
                hc = h(c);
            }
        }
        return std::max({h(0.0), h(cap), hc, hd});
    }

    double exact_gamma(const BcdState &state, const Scenario &scenario)
    {
        const auto r = rates_es(state.tau1, state.p, gains_of(state, scenario), scenario.params.sigma2);
        return std::min(r[0], r[1]);
    }

    BcdState initial_state(const Scenario &scenario, double tau0, const EsConfig &config)
    {
        if (scenario.n_users() != 2)
            throw StructureError("initial_state: the energy-splitting scheme serves exactly two users");
        const double T = scenario.params.T;
        if (!(tau0 > 0.0 && tau0 < T))
            throw DomainError("initial_state: tau0 must lie strictly inside the block");
        BcdState st;
        st.tau0 = tau0;
        st.tau1 = T - tau0;
        const int M = scenario.n_elements();
        const int N = scenario.n_antennas();
        Rng rng(mix_seed(config.seed, 0xE5));
        auto draw_pair = [&](std::vector<cvec> &out)
        {
            cvec a(M), b(M);
            for (int m = 0; m < M; ++m)
            {
                if (shared_surface(scenario))
                {
                    a(m) = b(m) = std::polar(1.0, rng.uniform(0.0, 2 * pi));
                    continue;
                }
                a(m) = std::polar(std::sqrt(0.5), rng.uniform(0.0, 2 * pi));
                b(m) = std::polar(std::sqrt(0.5), rng.uniform(0.0, 2 * pi));
            }
            out = {append_one(a), append_one(b)};
        };
        draw_pair(st.u_tilde);
        draw_pair(st.q_tilde);

        cmat R = cmat::Zero(N, N);
        for (int k = 0; k < 2; ++k)
        {
            const cvec g = scenario.combined.Gk[k].adjoint() * st.u_tilde[k];
            R += g * g.adjoint();
        }
        st.v = std::sqrt(scenario.params.P_A) * (R.norm() > 0.0 ? dominant_vector(R) : cvec(cvec::Unit(N, 0)));
        const auto E = harvested(st, scenario);
        st.p = {E[0] / st.tau1, E[1] / st.tau1};
        const auto w = mmse_receivers(scenario.combined.Hk, st.q_tilde, st.p, scenario.params.sigma2);
        st.w = {w[0], w[1]};
        st.gamma = exact_gamma(st, scenario);
        return st;
    }

    TraceRecord update_receivers(BcdState &state, const Scenario &scenario)
    {
        auto rec = start_record(state, Block::receivers);
        BcdState cand = state;
        const auto w = mmse_receivers(scenario.combined.Hk, cand.q_tilde, cand.p, scenario.params.sigma2);
        cand.w = {w[0], w[1]};
        cand.gamma = exact_gamma(cand, scenario);
        settle(rec, state, std::move(cand));
        return rec;
    }

    TraceRecord solve_energy_block(BcdState &state, const Scenario &scenario, const EsConfig &config)
    {
        auto rec = start_record(state, Block::energy);
        const auto &sp = scenario.params;
        const int N = scenario.n_antennas();
        const auto g = gains_of(state, scenario);

        std::vector<cmat> Phi;
        double top = 0.0;
        for (int k = 0; k < 2; ++k)
        {
            const cvec a = scenario.combined.Gk[k].adjoint() * state.u_tilde[k];
            Phi.push_back(a * a.adjoint());
            top = std::max(top, a.squaredNorm());
        }
        // Largest power either user could afford; powers enter scaled by it.
        const double scale = state.tau0 * sp.eta * sp.P_A * top / state.tau1;
        if (!(scale > 0.0))
        {
            rec.note = "no energy can reach the users";
            return rec;
        }
        state.pt_local = state.p[user_t];
        prepare_cuts(state, g, sp.sigma2);

        sdp::ConicProgram p;
        const auto V = p.add_psd("V", N); // V / P_A
        const auto xt = p.add_scalar("p_t");
        const auto xr = p.add_scalar("p_r");
        const auto gamma = p.add_scalar("gamma", false);
        p.add_constraint(sdp::LinearExpr().add_trace(V, cmat::Identity(N, N)), sdp::Relation::less_equal, 1.0,
                         "power budget");
        const double c = state.tau0 * sp.eta * sp.P_A / (state.tau1 * scale);
        const sdp::ScalarVar x[2] = {xt, xr};
        for (int k = 0; k < 2; ++k)
            p.add_constraint(sdp::LinearExpr().add_scalar(x[k], 1.0).add_trace(V, -c * Phi[k]),
                             sdp::Relation::less_equal, 0.0, "energy causality");
        p.set_objective(sdp::LinearExpr().add_scalar(gamma, 1.0));
        std::vector<LogConstraint> logs;
        add_rate_logs(logs, state, xt, xr, gamma, scale, g, sp.sigma2);

        const auto cs = detail::solve_with_cuts(p, logs, config.solver_tolerance, config.max_cut_rounds);
        rec.solves = cs.solves;
        rec.cut_rounds = cs.rounds;
        rec.solver_time = cs.solver_time;
        rec.relaxation_bound = std::max(cs.report.value(gamma), cs.report.dual_objective);

        const cmat Vs = cs.report.value(V);
        const auto res = sdp::rank_one_residual(Vs);
        rec.rank_one_residual = res.value;
        rec.rank_one_ok = res.value <= config.rank_one_threshold;
        if (!rec.rank_one_ok)
            rec.note = "energy beam relaxation is not rank one";

        BcdState cand = state;
        cand.v = std::sqrt(sp.P_A) * sdp::extract_vector(Vs, false, std::numeric_limits<double>::infinity());
        if (cand.v.squaredNorm() > sp.P_A)
            cand.v *= std::sqrt(sp.P_A) / cand.v.norm();
        const auto E = harvested(cand, scenario);
        rec.surrogate_score = surrogate_gamma(E, cand.tau1, g, sp.sigma2, state.pt_local);
        rec.bound_ok = within_bound(rec.surrogate_score, rec.relaxation_bound);
        cand.p = best_powers_es(E, cand.tau1, g, sp.sigma2);
        cand.gamma = exact_gamma(cand, scenario);
        settle(rec, state, std::move(cand));
        return rec;
    }

    TraceRecord solve_downlink_passive_block(BcdState &state, const Scenario &scenario, const EsConfig &config)
    {
        auto rec = start_record(state, Block::downlink);
        if (!has_surface(scenario))
        {
            rec.note = "no surface";
            return rec;
        }
        const auto &sp = scenario.params;
        const int n = scenario.n_elements() + 1;
        const auto g = gains_of(state, scenario);

        std::vector<cmat> Psi;
        double top = 0.0;
        for (int k = 0; k < 2; ++k)
        {
            const cvec a = scenario.combined.Gk[k] * state.v;
            Psi.push_back(a * a.adjoint());
            top = std::max(top, a.squaredNorm());
        }
        // Tr(U Psi) <= n ||Gk v||^2 since the diagonal of U is at most 1.
        const double scale = state.tau0 * sp.eta * n * top / state.tau1;
        if (!(scale > 0.0))
        {
            rec.note = "energy beam does not reach the surface or users";
            return rec;
        }
        state.pt_local = state.p[user_t];
        prepare_cuts(state, g, sp.sigma2);
        const double c = state.tau0 * sp.eta / (state.tau1 * scale);

        Builder build = [&](sdp::ConicProgram &p, std::vector<sdp::MatrixVar> &X, sdp::ScalarVar &gamma,
                            std::vector<LogConstraint> &logs)
        {
            X = add_surface(p, n, shared_surface(scenario), "U");
            const auto xt = p.add_scalar("p_t");
            const auto xr = p.add_scalar("p_r");
            gamma = p.add_scalar("gamma", false);
            const sdp::ScalarVar x[2] = {xt, xr};
            for (int k = 0; k < 2; ++k)
                p.add_constraint(sdp::LinearExpr().add_scalar(x[k], 1.0).add_trace(surface_of(X, k), -c * Psi[k]),
                                 sdp::Relation::less_equal, 0.0, "energy causality");
            add_rate_logs(logs, state, xt, xr, gamma, scale, g, sp.sigma2);
        };
        VectorScore score = [&](const std::vector<cvec> &u)
        {
            const auto E = energy_es(state.tau0, sp.eta, scenario.combined, u, state.v);
            return surrogate_gamma(E, state.tau1, g, sp.sigma2, state.pt_local);
        };
        const auto out = run_passive(scenario, config, build, score, mix_seed(config.seed, 0xD0 + state.iteration));

        rec.solves = out.solves;
        rec.cut_rounds = out.cut_rounds;
        rec.solver_time = out.time;
        rec.relaxation_bound = out.bound;
        rec.rank_one_residual = out.residual;
        rec.penalty = out.penalty;
        rec.penalty_rounds = out.rounds;
        rec.penalty_converged = out.converged;
        rec.note = out.note;
        state.xi = out.penalty;
        if (!out.vectors)
        {
            rec.accepted = false;
            return rec;
        }
        rec.surrogate_score = out.score;
        rec.bound_ok = within_bound(out.score, out.bound);

        BcdState cand = state;
        cand.u_tilde = *out.vectors;
        const auto E = harvested(cand, scenario);
        cand.p = best_powers_es(E, cand.tau1, g, sp.sigma2);
        cand.gamma = exact_gamma(cand, scenario);
        settle(rec, state, std::move(cand));
        return rec;
    }

    TraceRecord solve_uplink_passive_block(BcdState &state, const Scenario &scenario, const EsConfig &config)
    {
        auto rec = start_record(state, Block::uplink);
        if (!has_surface(scenario))
        {
            rec.note = "no surface";
            return rec;
        }
        const auto &sp = scenario.params;
        const int n = scenario.n_elements() + 1;
        const auto g = gains_of(state, scenario);
        const double pt = state.p[user_t], pr = state.p[user_r];
        const double S0 = pr * g.rr / sp.sigma2;
        if (!(S0 > 0.0))
        {
            rec.note = "user r is silent";
            return rec;
        }
        state.A_local = 1.0 / S0;
        state.B_local = 1.0 + pt * g.rt / sp.sigma2;
        const double A0 = state.A_local, B0 = state.B_local;
        detail::select_points(state.cuts_t, 1.0 + pt * g.tt / sp.sigma2);

        const auto &Hk = scenario.combined.Hk;
        auto quad = [&](const cmat &H, const cvec &w, double scale)
        {
            const crow a = w.adjoint() * H;
            return cmat(scale * a.adjoint() * a);
        };
        const cmat Kt = quad(Hk[user_t], state.w[user_t], pt / sp.sigma2);
        const cmat Kr = quad(Hk[user_r], state.w[user_r], pr / sp.sigma2);
        const cmat J = quad(Hk[user_t], state.w[user_r], pt / sp.sigma2);
        const double d = inv_ln2 / (1.0 + A0 * B0);

        Builder build = [&](sdp::ConicProgram &p, std::vector<sdp::MatrixVar> &X, sdp::ScalarVar &gamma,
                            std::vector<LogConstraint> &logs)
        {
            X = add_surface(p, n, shared_surface(scenario), "Q");
            // [[A/A0, 1], [1, S/S0]] >= 0 encodes 1/A <= S.
            const auto Z = p.add_psd("AS", 2);
            const auto Bh = p.add_scalar("B"); // B / B0
            gamma = p.add_scalar("gamma", false);
            p.add_constraint(sdp::LinearExpr().add_diag(Z, 1).add_trace(surface_of(X, user_r), -Kr / S0),
                             sdp::Relation::equal, 0.0, "useful power");
            p.add_constraint(sdp::LinearExpr().add_real_part(Z, 0, 1), sdp::Relation::equal, 1.0, "reciprocal");
            p.add_constraint(sdp::LinearExpr().add_imag_part(Z, 0, 1), sdp::Relation::equal, 0.0, "reciprocal");
            p.add_constraint(sdp::LinearExpr().add_scalar(Bh, 1.0).add_trace(surface_of(X, user_t), -J / B0),
                             sdp::Relation::greater_equal, 1.0 / B0, "interference");
            p.add_constraint(sdp::LinearExpr()
                                 .add_scalar(gamma, 1.0)
                                 .add_diag(Z, 0, state.tau1 * d)
                                 .add_scalar(Bh, state.tau1 * d),
                             sdp::Relation::less_equal, state.tau1 * (std::log2(1.0 + 1.0 / (A0 * B0)) + 2.0 * d),
                             "rate r bound");
            LogConstraint lt;
            lt.argument.add(1.0).trace(surface_of(X, user_t), Kt);
            lt.bound.scalar(gamma, 1.0);
            lt.weight = state.tau1;
            lt.points = &state.cuts_t;
            lt.label = "rate t";
            logs.push_back(lt);
        };
        VectorScore score = [&](const std::vector<cvec> &q)
        {
            const double S = (q[user_r].adjoint() * Kr * q[user_r])(0, 0).real();
            const double B = 1.0 + (q[user_t].adjoint() * J * q[user_t])(0, 0).real();
            const double Rt = state.tau1 * std::log2(1.0 + (q[user_t].adjoint() * Kt * q[user_t])(0, 0).real());
            if (!(S > 0.0))
                return -std::numeric_limits<double>::infinity();
            return std::min(Rt, rate_r_auxiliary_bound(state.tau1, 1.0 / S, B, A0, B0));
        };
        const auto out = run_passive(scenario, config, build, score, mix_seed(config.seed, 0x0F00 + state.iteration));

        rec.solves = out.solves;
        rec.cut_rounds = out.cut_rounds;
        rec.solver_time = out.time;
        rec.relaxation_bound = out.bound;
        rec.rank_one_residual = out.residual;
        rec.penalty = out.penalty;
        rec.penalty_rounds = out.rounds;
        rec.penalty_converged = out.converged;
        rec.note = out.note;
        state.xi_uplink = out.penalty;
        if (!out.vectors)
        {
            rec.accepted = false;
            return rec;
        }
        rec.surrogate_score = out.score;
        rec.bound_ok = within_bound(out.score, out.bound);

        BcdState cand = state;
        cand.q_tilde = *out.vectors;
        cand.gamma = exact_gamma(cand, scenario);
        settle(rec, state, std::move(cand));
        return rec;
    }

    InnerResult bcd_inner(double tau0, BcdState init, const Scenario &scenario, const EsConfig &config)
    {
        config.validate();
        if (std::abs(init.tau0 - tau0) > 1e-12 || std::abs(init.tau0 + init.tau1 - scenario.params.T) > 1e-12)
            throw DomainError("bcd_inner: initial state does not match the time split");
        InnerResult out;
        BcdState st = std::move(init);
        st.gamma = exact_gamma(st, scenario);
        out.gamma_history.push_back(st.gamma);
        for (int it = 1; it <= config.max_inner_iterations; ++it)
        {
            st.iteration = it;
            const double before = st.gamma;
            out.trace.push_back(update_receivers(st, scenario));
            out.trace.push_back(solve_energy_block(st, scenario, config));
            out.trace.push_back(solve_downlink_passive_block(st, scenario, config));
            out.trace.push_back(solve_uplink_passive_block(st, scenario, config));
            out.gamma_history.push_back(st.gamma);
            out.iterations = it;
            if (st.gamma - before < config.inner_tolerance)
            {
                out.converged = true;
                break;
            }
        }

        auto &x = out.solution;
        x.tau0 = st.tau0;
        x.tau1 = st.tau1;
        x.v = st.v;
        x.w = st.w;
        x.p = st.p;
        x.gamma = st.gamma;
        const int M = scenario.n_elements();
        for (int k = 0; k < 2; ++k)
        {
            x.profile.u.push_back(st.u_tilde[k].head(M));
            x.profile.q.push_back(st.q_tilde[k].head(M));
        }
        out.report = validate(x, scenario);
        return out;
    }

    std::vector<double> tau_grid(double step)
    {
        if (!(step > 0.0 && step < 1.0))
            throw DomainError("tau_grid: step must lie in (0, 1)");
        std::vector<double> g;
        for (int k = 1;; ++k)
        {
            const double t = k * step;
            if (t >= 1.0 - 1e-9)
                break;
            g.push_back(t);
        }
        return g;
    }

    EsResult algorithm1(const Scenario &scenario, const EsConfig &config)
    {
        config.validate();
        const auto t0 = std::chrono::steady_clock::now();
        EsResult out;
        double best = -1.0;
        std::optional<InnerResult> best_run;
        for (double f : tau_grid(config.tau_step))
        {
            TauPoint pt;
            pt.tau0 = f * scenario.params.T;
            try
            {
                auto run = bcd_inner(pt.tau0, initial_state(scenario, pt.tau0, config), scenario, config);
                pt.ok = true;
                pt.gamma = run.solution.gamma;
                pt.iterations = run.iterations;
                pt.converged = run.converged;
                out.trace.insert(out.trace.end(), run.trace.begin(), run.trace.end());
                // Strict improvement keeps the smallest tau0 among ties.
                if (pt.gamma > best)
                {
                    best = pt.gamma;
                    out.best_index = static_cast<int>(out.grid.size());
                    best_run = std::move(run);
                }
            }
            catch (const SolverError &e)
            {
                pt.error = e.what();
            }
            out.grid.push_back(pt);
        }
        if (!best_run)
        {
            std::ostringstream os;
            os << "algorithm1: every grid point failed";
            if (!out.grid.empty())
                os << " (first: " << out.grid.front().error << ")";
            throw SolverError(os.str());
        }
        out.solution = best_run->solution;
        out.report = best_run->report;
        out.wall_time = seconds_since(t0);
        return out;
    }
}
