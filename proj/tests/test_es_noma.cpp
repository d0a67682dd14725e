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


#include "doctest.h"

#include "starwpcn/es_noma.hpp"
#include "starwpcn/sdp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace starwpcn;
using namespace starwpcn::es;

namespace
{
    using oracles::element_pair;
    using oracles::random_vec;
    using oracles::sinr_r;
    using oracles::two_pi;

    Scenario scenario_of(int n_antennas, int n_elements, std::uint64_t seed, SurfaceKind kind = SurfaceKind::star)
    {
        auto g = default_geometry(n_antennas, n_elements, seed);
        if (kind == SurfaceKind::reflect_only)
            g = with_reflect_only_surface(g);
        return make_scenario(g, FadingParams{}, SystemParams{}, seed, kind);
    }

    // State after a receiver update, ready for a block solve.
    BcdState prepared(const Scenario &s, double tau0, const EsConfig &cfg)
    {
        auto st = initial_state(s, tau0, cfg);
        update_receivers(st, s);
        return st;
    }
}

TEST_CASE("MMSE receivers")
{
    Rng rng(3);
    const double s2 = 1e-3;
    SUBCASE("single antenna gives unit scalars")
    {
        std::vector<cmat> H{cmat::Constant(1, 2, cdouble(0.3, 0.1)), cmat::Constant(1, 2, cdouble(-0.2, 0.5))};
        std::vector<cvec> q{cvec::Ones(2), cvec::Ones(2)};
        const auto w = mmse_receivers(H, q, {0.5, 0.7}, s2);
        CHECK(std::abs(w[0].norm() - 1.0) < 1e-12);
        CHECK(std::abs(w[1].norm() - 1.0) < 1e-12);
    }
    SUBCASE("silent interferer leaves matched filters")
    {
        std::vector<cmat> H{cmat::Random(4, 3), cmat::Random(4, 3)};
        std::vector<cvec> q{random_vec(3, rng), random_vec(3, rng)};
        const auto w = mmse_receivers(H, q, {0.0, 0.4}, s2);
        const cvec hr = H[1] * q[1];
        CHECK(std::abs(std::abs(w[1].dot(hr)) - hr.norm()) < 1e-10 * hr.norm());
    }
    SUBCASE("dominance over random unit vectors")
    {
        for (int trial = 0; trial < 5; ++trial)
        {
            const int N = 2 + trial % 3;
            std::vector<cmat> H{cmat::Random(N, 4), cmat::Random(N, 4)};
            std::vector<cvec> q{random_vec(4, rng), random_vec(4, rng)};
            const double pt = rng.uniform(0.01, 1.0), pr = rng.uniform(0.01, 1.0);
            const auto w = mmse_receivers(H, q, {pt, pr}, s2);
            const cvec ht = H[0] * q[0], hr = H[1] * q[1];
            const double best_r = sinr_r(w[1], ht, hr, pt, pr, s2);
            const double best_t = std::norm(w[0].dot(ht));
            int violations = 0;
            for (int i = 0; i < 10000; ++i)
            {
                cvec c = random_vec(N, rng);
                c.normalize();
                if (sinr_r(c, ht, hr, pt, pr, s2) > best_r * (1.0 + 1e-12))
                    ++violations;
                if (std::norm(c.dot(ht)) > best_t * (1.0 + 1e-12))
                    ++violations;
            }
            CHECK(violations == 0);
        }
    }
}

TEST_CASE("rate bounds")
{
    Rng rng(5);
    const double s2 = 1e-2;
    SUBCASE("power bound is tight at its expansion point and below elsewhere")
    {
        for (int i = 0; i < 200; ++i)
        {
            const EsGains g{rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0)};
            const double tau1 = rng.uniform(0.1, 0.9);
            const double pl = rng.uniform(0.0, 1.0), pt = rng.uniform(0.0, 1.0), pr = rng.uniform(0.0, 1.0);
            const auto exact_at = rates_es(tau1, {pl, pr}, g, s2);
            CHECK(rate_r_power_bound(tau1, pl, pr, g, s2, pl) == doctest::Approx(exact_at[1]).epsilon(1e-12));
            const auto exact = rates_es(tau1, {pt, pr}, g, s2);
            CHECK(rate_r_power_bound(tau1, pt, pr, g, s2, pl) <= exact[1] + 1e-12);
        }
    }
    SUBCASE("auxiliary bound is tight at its expansion point and below elsewhere")
    {
        for (int i = 0; i < 200; ++i)
        {
            const double tau1 = rng.uniform(0.1, 0.9);
            const double A0 = std::exp(rng.uniform(-4.0, 4.0)), B0 = 1.0 + std::exp(rng.uniform(-4.0, 4.0));
            const double A = std::exp(rng.uniform(-4.0, 4.0)), B = 1.0 + std::exp(rng.uniform(-4.0, 4.0));
            CHECK(rate_r_auxiliary_bound(tau1, A0, B0, A0, B0) ==
                  doctest::Approx(tau1 * std::log2(1.0 + 1.0 / (A0 * B0))).epsilon(1e-12));
            CHECK(rate_r_auxiliary_bound(tau1, A, B, A0, B0) <= tau1 * std::log2(1.0 + 1.0 / (A * B)) + 1e-12);
        }
    }
    SUBCASE("surrogate never exceeds the exact max-min over powers")
    {
        for (int i = 0; i < 200; ++i)
        {
            const EsGains g{rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0)};
            const double tau1 = rng.uniform(0.1, 0.9);
            const std::vector<double> E{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
            const double pl = rng.uniform(0.0, E[0] / tau1);
            const auto p = best_powers_es(E, tau1, g, s2);
            const auto r = rates_es(tau1, p, g, s2);
            CHECK(surrogate_gamma(E, tau1, g, s2, pl) <= std::min(r[0], r[1]) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("energy block")
{
    EsConfig cfg;
    SUBCASE("budget is used in full and the relaxation is rank one")
    {
        const auto s = scenario_of(4, 8, 2);
        auto st = prepared(s, 0.5, cfg);
        const double before = st.gamma;
        const auto rec = solve_energy_block(st, s, cfg);
        CHECK(rec.rank_one_ok);
        CHECK(rec.rank_one_residual <= 1e-3);
        CHECK(rec.bound_ok);
        CHECK(st.gamma >= before - 1e-12);
        if (rec.accepted)
            CHECK(st.v.squaredNorm() == doctest::Approx(s.params.P_A).epsilon(1e-6));
    }
    SUBCASE("two-antenna beam against a grid")
    {
        const auto s = scenario_of(2, 2, 4);
        auto st = prepared(s, 0.4, cfg);
        const double pl = st.p[user_t];
        const auto g = es_gains(st.w, s.combined.Hk, st.q_tilde);
        const auto rec = solve_energy_block(st, s, cfg);
        double best = 0.0;
        const int na = 400, nb = 400;
        for (int i = 0; i <= na; ++i)
            for (int j = 0; j < nb; ++j)
            {
                const double a = 0.5 * std::numbers::pi * i / na, b = two_pi * j / nb;
                cvec v(2);
                v << std::cos(a), std::sin(a) * std::polar(1.0, b);
                v *= std::sqrt(s.params.P_A);
                const auto E = energy_es(st.tau0, s.params.eta, s.combined, st.u_tilde, v);
                best = std::max(best, surrogate_gamma(E, st.tau1, g, s.params.sigma2, pl));
            }
        CHECK(rec.surrogate_score >= 0.99 * best);
        CHECK(best <= rec.relaxation_bound * (1.0 + 1e-6));
    }
}

TEST_CASE("downlink passive block")
{
    EsConfig cfg;
    SUBCASE("single element against a grid")
    {
        for (std::uint64_t seed : {1, 2, 3})
        {
            const auto s = scenario_of(2, 1, seed);
            auto st = prepared(s, 0.5, cfg);
            const double pl = st.p[user_t];
            const auto g = es_gains(st.w, s.combined.Hk, st.q_tilde);
            const double best = oracles::es_downlink_grid(st, s, g, pl);
            const auto rec = solve_downlink_passive_block(st, s, cfg);
            CHECK(rec.penalty_converged);
            CHECK(rec.rank_one_residual <= cfg.penalty_tolerance);
            CHECK(rec.surrogate_score >= 0.99 * best);
            CHECK(rec.bound_ok);
        }
    }
    SUBCASE("amplitude split is restored exactly")
    {
        const auto s = scenario_of(4, 8, 6);
        auto st = prepared(s, 0.5, cfg);
        solve_downlink_passive_block(st, s, cfg);
        for (int m = 0; m < 8; ++m)
            CHECK(std::norm(st.u_tilde[0](m)) + std::norm(st.u_tilde[1](m)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(st.u_tilde[0](8) == cdouble(1.0));
        CHECK(st.u_tilde[1](8) == cdouble(1.0));
    }
}

TEST_CASE("uplink passive block")
{
    EsConfig cfg;
    SUBCASE("single element against a grid of the same surrogate")
    {
        for (std::uint64_t seed : {1, 2, 3})
        {
            const auto s = scenario_of(2, 1, seed);
            auto st = prepared(s, 0.5, cfg);
            const auto &sp = s.params;
            const double pt = st.p[user_t], pr = st.p[user_r];
            const auto g0 = es_gains(st.w, s.combined.Hk, st.q_tilde);
            const double A0 = sp.sigma2 / (pr * g0.rr), B0 = 1.0 + pt * g0.rt / sp.sigma2;
            const double best = oracles::es_uplink_grid(st, s, A0, B0);
            const auto rec = solve_uplink_passive_block(st, s, cfg);
            CHECK(rec.penalty_converged);
            CHECK(rec.surrogate_score >= best - 0.01 * std::abs(best));
            CHECK(rec.bound_ok);
        }
    }
    SUBCASE("gamma never decreases")
    {
        const auto s = scenario_of(4, 8, 9);
        auto st = prepared(s, 0.5, cfg);
        solve_energy_block(st, s, cfg);
        const double before = st.gamma;
        solve_uplink_passive_block(st, s, cfg);
        CHECK(st.gamma >= before - 1e-12);
    }
}

TEST_CASE("inner loop")
{
    EsConfig cfg;
    SUBCASE("non-decreasing and feasible")
    {
        const auto s = scenario_of(2, 4, 11);
        const auto out = bcd_inner(0.5, initial_state(s, 0.5, cfg), s, cfg);
        for (std::size_t i = 1; i < out.gamma_history.size(); ++i)
            CHECK(out.gamma_history[i] >= out.gamma_history[i - 1] - 1e-6);
        CHECK(out.report.feasible());
        CHECK(out.solution.gamma == doctest::Approx(out.report.min_rate).epsilon(1e-9));
        CHECK(out.gamma_history.back() > out.gamma_history.front());
        for (const auto &r : out.trace)
            CHECK(r.bound_ok);
    }
    SUBCASE("zero initial powers are lifted")
    {
        const auto s = scenario_of(2, 4, 12);
        auto init = initial_state(s, 0.5, cfg);
        init.p = {0.0, 0.0};
        init.gamma = exact_gamma(init, s);
        CHECK(init.gamma == 0.0);
        const auto out = bcd_inner(0.5, init, s, cfg);
        CHECK(out.solution.gamma > 0.0);
        CHECK(out.report.feasible());
    }
    SUBCASE("conventional surface keeps one unit-modulus vector")
    {
        const auto s = scenario_of(2, 4, 13, SurfaceKind::reflect_only);
        const auto out = bcd_inner(0.5, initial_state(s, 0.5, cfg), s, cfg);
        CHECK(out.report.feasible());
        for (const auto *set : {&out.solution.profile.u, &out.solution.profile.q})
        {
            CHECK(((*set)[0] - (*set)[1]).norm() < 1e-12);
            for (int m = 0; m < 4; ++m)
                CHECK(std::abs((*set)[0](m)) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("direct links only skip the passive blocks")
    {
        const auto s = scenario_of(2, 4, 14, SurfaceKind::none);
        const auto out = bcd_inner(0.5, initial_state(s, 0.5, cfg), s, cfg);
        CHECK(out.report.feasible());
        for (const auto &r : out.trace)
            if (r.block == Block::downlink || r.block == Block::uplink)
                CHECK(r.solves == 0);
    }
    SUBCASE("randomized recovery respects the relaxation bound")
    {
        auto gr = cfg;
        gr.passive = PassiveMethod::randomization;
        const auto s = scenario_of(2, 4, 15);
        const auto out = bcd_inner(0.5, initial_state(s, 0.5, gr), s, gr);
        CHECK(out.report.feasible());
        for (const auto &r : out.trace)
            CHECK(r.bound_ok);
    }
}

TEST_CASE("outer search over the WPT duration")
{
    CHECK(tau_grid(0.1).size() == 9);
    CHECK(tau_grid(0.25).size() == 3);
    CHECK(tau_grid(0.1).front() == doctest::Approx(0.1));
    CHECK(tau_grid(0.1).back() == doctest::Approx(0.9));

    EsConfig cfg;
    const auto s = scenario_of(1, 4, 21);
    const auto res = algorithm1(s, cfg);
    REQUIRE(res.grid.size() == 9);
    REQUIRE(res.best_index >= 0);
    for (const auto &pt : res.grid)
    {
        CHECK(pt.ok);
        CHECK(pt.gamma <= res.grid[res.best_index].gamma);
    }
    for (int i = 0; i < res.best_index; ++i)
        CHECK(res.grid[i].gamma < res.grid[res.best_index].gamma);
    CHECK(res.solution.gamma == doctest::Approx(res.grid[res.best_index].gamma).epsilon(1e-12));
    CHECK(res.solution.tau0 == doctest::Approx(res.grid[res.best_index].tau0).epsilon(1e-12));
    CHECK(res.report.feasible());
    CHECK(res.solution.tau0 + res.solution.tau1 <= s.params.T * (1.0 + 1e-12));
}
