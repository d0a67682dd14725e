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

#include "starwpcn/model.hpp"

#include <cmath>

using namespace starwpcn;

namespace
{
    cvec random_vec(int n, Rng &rng)
    {
        cvec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = rng.complex_normal();
        return v;
    }

    cvec random_phases(int n, Rng &rng, double amp = 1.0)
    {
        cvec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = std::polar(amp, rng.uniform(0.0, 2.0 * pi));
        return v;
    }

    Scenario scenario(int N, int M, std::uint64_t seed, SurfaceKind kind = SurfaceKind::star)
    {
        auto g = default_geometry(N, M, seed);
        if (kind == SurfaceKind::reflect_only)
            g = with_reflect_only_surface(g);
        return make_scenario(g, FadingParams{}, SystemParams{}, seed, kind);
    }

    EsSolution zero_es(const Scenario &s)
    {
        EsSolution x;
        x.tau0 = 0.5;
        x.tau1 = 0.5;
        x.v = cvec::Zero(s.n_antennas());
        x.v(0) = 1.0;
        const int M = s.n_elements();
        for (int k = 0; k < 2; ++k)
        {
            cvec w = cvec::Zero(s.n_antennas());
            w(0) = 1.0;
            x.w.push_back(w);
            x.profile.u.push_back(cvec::Constant(M, std::sqrt(0.5)));
            x.profile.q.push_back(cvec::Constant(M, std::sqrt(0.5)));
        }
        x.p = {0.0, 0.0};
        x.gamma = 0.0;
        return x;
    }
}

TEST_CASE("unit conversions and parameters")
{
    CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    SystemParams p;
    CHECK(p.sigma2 == doctest::Approx(1e-12));
    CHECK(p.eta == 0.8);
    CHECK(p.P_A == 5.0);
    p.eta = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK(append_one(cvec::Zero(2))(2) == cdouble(1.0, 0.0));
}

TEST_CASE("energy evaluators")
{
    const auto s = scenario(3, 4, 1);
    Rng rng(2);
    std::vector<cvec> ut = {append_one(random_phases(4, rng, std::sqrt(0.5))),
                            append_one(random_phases(4, rng, std::sqrt(0.5)))};
    const cvec v = random_vec(3, rng);
    for (double e : energy_es(0.0, 0.8, s.combined, ut, v))
        CHECK(e == 0.0);
    for (double e : energy_es(0.4, 0.8, s.combined, ut, cvec::Zero(3)))
        CHECK(e == 0.0);
    for (double e : energy_ts({0.0, 0.0}, 0.8, s.combined, ut, {v, v}))
        CHECK(e == 0.0);

    // Direct link only, single antenna: E = tau0 eta |g_a|^2 |v|^2.
    const auto d = scenario(1, 0, 3, SurfaceKind::none);
    const cvec v1 = cvec::Constant(1, cdouble(0.3, -1.2));
    const auto e = energy_es(0.6, 0.8, d.combined, {append_one(cvec(0)), append_one(cvec(0))}, v1);
    for (int k = 0; k < 2; ++k)
        CHECK(e[k] == doctest::Approx(0.6 * 0.8 * std::norm(d.channels.g_a[k](0)) * std::norm(v1(0))).epsilon(1e-13));

    // eta enters linearly.
    const auto e1 = energy_ts({0.3, 0.2}, 1.0, s.combined, ut, {v, v});
    const auto e8 = energy_ts({0.3, 0.2}, 0.8, s.combined, ut, {v, v});
    for (int k = 0; k < 2; ++k)
        CHECK(e8[k] == doctest::Approx(0.8 * e1[k]).epsilon(1e-14));

    // Matched transmit beam: E = tau0 eta P ||Gk^H u~||^2.
    const std::vector<cvec> uu = {append_one(random_phases(4, rng)), append_one(random_phases(4, rng))};
    std::vector<cvec> vm;
    for (int k = 0; k < 2; ++k)
    {
        const cvec d0 = s.combined.Gk[k].adjoint() * uu[k];
        vm.push_back(std::sqrt(5.0) * d0 / d0.norm());
    }
    const auto em = energy_ts({0.25, 0.35}, 0.8, s.combined, uu, vm);
    for (int k = 0; k < 2; ++k)
    {
        const double ref = (k == 0 ? 0.25 : 0.35) * 0.8 * 5.0 * (s.combined.Gk[k].adjoint() * uu[k]).squaredNorm();
        CHECK(em[k] == doctest::Approx(ref).epsilon(1e-12));
    }

    CHECK_THROWS_AS(energy_es(0.5, 0.8, s.combined, {ut[0]}, v), StructureError);
    CHECK_THROWS_AS(energy_es(-0.1, 0.8, s.combined, ut, v), DomainError);
}

TEST_CASE("energy-splitting rates")
{
    const auto s = scenario(2, 3, 4);
    Rng rng(5);
    const std::vector<cvec> qt = {append_one(random_phases(3, rng, std::sqrt(0.5))),
                                  append_one(random_phases(3, rng, std::sqrt(0.5)))};
    std::vector<cvec> w = {random_vec(2, rng).normalized(), random_vec(2, rng).normalized()};
    const double s2 = 1e-12;

    const auto z = rates_es(0.6, {0.0, 0.0}, w, s.combined.Hk, qt, s2);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);

    // p_t = 0: user r sees no interference.
    const auto r0 = rates_es(0.6, {0.0, 1e-3}, w, s.combined.Hk, qt, s2);
    const auto rt = rates_ts({0.4, 0.6}, {1.0, 1e-3}, w, s.combined.Hk, qt, s2);
    CHECK(r0[user_r] == doctest::Approx(rt[user_r]).epsilon(1e-14));

    // Trace form equals the scalar form.
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
        {
            const cmat W = w[k] * w[k].adjoint();
            const cmat Q = qt[j] * qt[j].adjoint();
            const double tr = (W * s.combined.Hk[j] * Q * s.combined.Hk[j].adjoint()).trace().real();
            const double sc = std::norm(w[k].dot(s.combined.Hk[j] * qt[j]));
            CHECK(tr == doctest::Approx(sc).epsilon(1e-12));
        }

    // SIC consistency: zero leakage gives the interference-free formula.
    EsGains g = es_gains(w, s.combined.Hk, qt);
    g.rt = 0.0;
    const auto ri = rates_es(0.7, {2e-3, 3e-3}, g, s2);
    CHECK(ri[user_r] == 0.7 * std::log2(1.0 + 3e-3 * g.rr / s2));

    // Monotone in own power.
    double prev_t = -1.0, prev_r = -1.0;
    for (double p = 0.0; p < 1e-2; p += 1e-3)
    {
        const auto a = rates_es(0.5, {p, 1e-3}, w, s.combined.Hk, qt, s2);
        const auto b = rates_es(0.5, {1e-3, p}, w, s.combined.Hk, qt, s2);
        CHECK(a[user_t] >= prev_t);
        CHECK(b[user_r] >= prev_r);
        prev_t = a[user_t];
        prev_r = b[user_r];
    }
}

TEST_CASE("time-switching rates")
{
    const auto s = scenario(2, 3, 6);
    Rng rng(7);
    const cvec q = append_one(random_phases(3, rng));
    const cvec w = random_vec(2, rng).normalized();
    const double s2 = 1e-12;
    const auto z = rates_ts({0.0, 0.0}, {1.0, 1.0}, {w, w}, s.combined.Hk, {q, q}, s2);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);

    // High SNR: doubling the power adds about tau1 bits.
    const double snr_p = 1.0;
    const auto a = rates_ts({0.3, 0.3}, {snr_p, snr_p}, {w, w}, s.combined.Hk, {q, q}, s2);
    const auto b = rates_ts({0.3, 0.3}, {2 * snr_p, 2 * snr_p}, {w, w}, s.combined.Hk, {q, q}, s2);
    const double gain = std::norm(w.dot(s.combined.Hk[0] * q)) / s2;
    REQUIRE(gain > 1e4);
    CHECK(b[0] - a[0] == doctest::Approx(0.3).epsilon(1e-3));

    // Equal configuration, equal rates.
    const std::vector<cmat> same = {s.combined.Hk[0], s.combined.Hk[0]};
    const auto e = rates_ts({0.2, 0.2}, {1e-3, 1e-3}, {w, w}, same, {q, q}, s2);
    CHECK(e[0] == e[1]);
}

TEST_CASE("best powers equalize or exhaust")
{
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial)
    {
        EsGains g{std::exp(rng.uniform(-30, -20)), std::exp(rng.uniform(-30, -20)), std::exp(rng.uniform(-33, -20))};
        const std::vector<double> e = {rng.uniform(0.0, 1e-4), rng.uniform(0.0, 1e-4)};
        const double tau1 = rng.uniform(0.1, 0.9);
        const auto p = best_powers_es(e, tau1, g, 1e-12);
        CHECK(p[user_r] == doctest::Approx(e[user_r] / tau1));
        CHECK(p[user_t] <= e[user_t] / tau1 * (1 + 1e-15));
        const auto r = rates_es(tau1, p, g, 1e-12);
        const double best = std::min(r[0], r[1]);
        if (p[user_t] < e[user_t] / tau1 * (1 - 1e-12))
            CHECK(r[0] == doctest::Approx(r[1]).epsilon(1e-9));
        // Grid oracle over p_t.
        for (int i = 0; i <= 200; ++i)
        {
            const double pt = e[user_t] / tau1 * i / 200.0;
            const auto rr = rates_es(tau1, {pt, p[user_r]}, g, 1e-12);
            CHECK(std::min(rr[0], rr[1]) <= best * (1 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("energy-splitting validation")
{
    const auto s = scenario(2, 4, 9);
    auto x = zero_es(s);
    auto rep = validate(x, s);
    CHECK(rep.feasible());
    CHECK(rep.min_rate == 0.0);

    // Spend 1% more than harvested.
    x.v = cvec::Constant(2, std::sqrt(2.5));
    const auto e = energy_es(x.tau0, 0.8, s.combined,
                             {append_one(x.profile.u[0]), append_one(x.profile.u[1])}, x.v);
    x.p = {e[0] / x.tau1, e[1] / x.tau1};
    CHECK(validate(x, s).feasible());
    x.p[1] *= 1.01;
    rep = validate(x, s);
    CHECK(!rep.feasible());
    CHECK(rep.summary().find("energy causality 1") != std::string::npos);

    // Broken amplitude split and overdrawn budget.
    x = zero_es(s);
    x.profile.u[0](2) = 0.9;
    CHECK(!validate(x, s).feasible());
    x = zero_es(s);
    x.v = cvec::Constant(2, 2.0);
    CHECK(!validate(x, s).feasible());
    x = zero_es(s);
    x.gamma = 0.1;
    CHECK(!validate(x, s).feasible());
}

TEST_CASE("reflect-only validation requires a shared unit-modulus vector")
{
    const auto s = scenario(2, 3, 10, SurfaceKind::reflect_only);
    auto x = zero_es(s);
    CHECK(!validate(x, s).feasible());
    Rng rng(1);
    const cvec u = random_phases(3, rng);
    x.profile.u = {u, u};
    x.profile.q = {u, u};
    CHECK(validate(x, s).feasible());
    x.profile.q[1] = random_phases(3, rng);
    CHECK(!validate(x, s).feasible());
}

TEST_CASE("time-switching validation")
{
    const auto s = scenario(2, 3, 11);
    Rng rng(3);
    TsSolution x;
    x.tau0 = {0.25, 0.25};
    x.tau1 = {0.25, 0.25};
    x.P = {5.0, 5.0};
    x.p = {0.0, 0.0};
    for (int k = 0; k < 2; ++k)
    {
        x.profile.u.push_back(random_phases(3, rng));
        x.profile.q.push_back(random_phases(3, rng));
        x.v.push_back(std::sqrt(5.0) * random_vec(2, rng).normalized());
        x.w.push_back(random_vec(2, rng).normalized());
    }
    CHECK(validate(x, s).feasible());
    x.tau1[0] = 0.3;
    CHECK(!validate(x, s).feasible());
    x.tau1[0] = 0.25;
    x.profile.u[1](0) *= 0.5;
    CHECK(!validate(x, s).feasible());
}
