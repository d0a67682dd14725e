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


#include "starwpcn/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace starwpcn
{
    namespace
    {
        double rel_excess(double value, double bound)
        {
            // Relative amount by which value exceeds bound.
            const double excess = value - bound;
            if (excess <= 0.0)
                return 0.0;
            const double scale = std::max(std::abs(bound), std::abs(value));
            return scale > 0.0 ? excess / scale : 0.0;
        }

        void add(ConstraintReport &r, std::string name, double residual)
        {
            const bool ok = std::isfinite(residual) && residual <= r.threshold;
            r.checks.push_back({std::move(name), residual, ok});
        }

        double rate(double tau, double snr) { return tau * std::log2(1.0 + snr); }

        void check_users(const Scenario &s, int expected)
        {
            if (expected > 0 && s.n_users() != expected)
                throw StructureError("expected " + std::to_string(expected) + " users, scenario has " +
                                     std::to_string(s.n_users()));
        }

        void add_surface_checks(ConstraintReport &r, const Scenario &s, const std::vector<cvec> &vecs,
                                const std::string &phase, bool es)
        {
            const int M = s.n_elements();
            for (std::size_t k = 0; k < vecs.size(); ++k)
                if (vecs[k].size() != M)
                    throw StructureError(phase + " tuning vector has wrong length");
            if (M == 0 || s.surface == SurfaceKind::none)
                return;
            if (s.surface == SurfaceKind::star && es)
            {
                double worst = 0.0, range = 0.0;
                for (int m = 0; m < M; ++m)
                {
                    double sum = 0.0;
                    for (const auto &v : vecs)
                    {
                        const double a = std::norm(v(m));
                        sum += a;
                        range = std::max(range, std::max(a - 1.0, -a));
                    }
                    worst = std::max(worst, std::abs(sum - 1.0));
                }
                add(r, phase + " amplitude split", worst);
                add(r, phase + " amplitude range", range);
                return;
            }
            double worst = 0.0;
            for (const auto &v : vecs)
                for (int m = 0; m < M; ++m)
                    worst = std::max(worst, std::abs(std::abs(v(m)) - 1.0));
            add(r, phase + " unit modulus", worst);
            if (s.surface == SurfaceKind::reflect_only && es)
            {
                double diff = 0.0;
                for (std::size_t k = 1; k < vecs.size(); ++k)
                    diff = std::max(diff, (vecs[k] - vecs[0]).cwiseAbs().maxCoeff());
                add(r, phase + " shared reflection", diff);
            }
        }

        std::vector<cvec> tilde(const std::vector<cvec> &x)
        {
            std::vector<cvec> out;
            for (const auto &v : x)
                out.push_back(append_one(v));
            return out;
        }
    }

    void SystemParams::validate() const
    {
        if (!(P_A >= 0.0) || !std::isfinite(P_A))
            throw DomainError("P_A must be finite and >= 0");
        if (!(eta > 0.0 && eta <= 1.0))
            throw DomainError("eta must lie in (0, 1]");
        if (!(sigma2 > 0.0))
            throw DomainError("noise power must be positive");
        if (!(T > 0.0))
            throw DomainError("block time must be positive");
    }

    double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    const char *to_string(SurfaceKind s)
    {
        switch (s)
        {
        case SurfaceKind::star:
            return "star";
        case SurfaceKind::reflect_only:
            return "reflect_only";
        case SurfaceKind::none:
            return "none";
        }
        return "?";
    }

    Scenario make_scenario(const ScenarioGeometry &geometry, const FadingParams &fading, const SystemParams &params,
                           std::uint64_t seed, SurfaceKind surface)
    {
        params.validate();
        Scenario s;
        s.params = params;
        s.geometry = geometry;
        s.fading = fading;
        s.surface = surface;
        s.seed = seed;
        if (surface == SurfaceKind::reflect_only)
            s.geometry.transmissive = false;
        if (surface == SurfaceKind::none)
            s.geometry.n_elements = 0;
        s.channels = generate_channels(s.geometry, fading, seed);
        s.combined = combine(s.channels);
        return s;
    }

    cvec append_one(const cvec &x)
    {
        cvec out(x.size() + 1);
        out.head(x.size()) = x;
        out(x.size()) = 1.0;
        return out;
    }

    std::vector<double> energy_es(double tau0, double eta, const CombinedChannels &combined,
                                  const std::vector<cvec> &u_tilde, const cvec &v)
    {
        if (!(tau0 >= 0.0))
            throw DomainError("energy_es: tau0 must be >= 0");
        if (static_cast<int>(u_tilde.size()) != combined.n_users())
            throw StructureError("energy_es: one tuning vector per user is required");
        std::vector<double> e;
        for (int k = 0; k < combined.n_users(); ++k)
        {
            const cmat &G = combined.Gk[k];
            if (u_tilde[k].size() != G.rows() || v.size() != G.cols())
                throw StructureError("energy_es: dimension mismatch");
            e.push_back(tau0 * eta * std::norm((u_tilde[k].adjoint() * G * v)(0, 0)));
        }
        return e;
    }

    std::vector<double> energy_ts(const std::vector<double> &tau0, double eta, const CombinedChannels &combined,
                                  const std::vector<cvec> &u_tilde, const std::vector<cvec> &v)
    {
        const int K = combined.n_users();
        if (static_cast<int>(tau0.size()) != K || static_cast<int>(u_tilde.size()) != K ||
            static_cast<int>(v.size()) != K)
            throw StructureError("energy_ts: per-user inputs must match the number of users");
        std::vector<double> e;
        for (int k = 0; k < K; ++k)
        {
            if (!(tau0[k] >= 0.0))
                throw DomainError("energy_ts: times must be >= 0");
            const cmat &G = combined.Gk[k];
            if (u_tilde[k].size() != G.rows() || v[k].size() != G.cols())
                throw StructureError("energy_ts: dimension mismatch");
            e.push_back(tau0[k] * eta * std::norm((u_tilde[k].adjoint() * G * v[k])(0, 0)));
        }
        return e;
    }

    EsGains es_gains(const std::vector<cvec> &w, const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde)
    {
        if (w.size() != 2 || Hk.size() != 2 || q_tilde.size() != 2)
            throw StructureError("es_gains: exactly two users");
        for (int k = 0; k < 2; ++k)
            if (w[k].size() != Hk[k].rows() || q_tilde[k].size() != Hk[k].cols())
                throw StructureError("es_gains: dimension mismatch");
        const cvec ht = Hk[user_t] * q_tilde[user_t];
        const cvec hr = Hk[user_r] * q_tilde[user_r];
        EsGains g;
        g.tt = std::norm(w[user_t].dot(ht));
        g.rr = std::norm(w[user_r].dot(hr));
        g.rt = std::norm(w[user_r].dot(ht));
        return g;
    }

    std::array<double, 2> rates_es(double tau1, const std::vector<double> &p, const EsGains &g, double sigma2)
    {
        if (p.size() != 2)
            throw StructureError("rates_es: exactly two powers");
        if (p[0] < 0.0 || p[1] < 0.0)
            throw DomainError("rates_es: powers must be >= 0");
        std::array<double, 2> r{};
        r[user_t] = rate(tau1, p[user_t] * g.tt / sigma2);
        r[user_r] = rate(tau1, p[user_r] * g.rr / (p[user_t] * g.rt + sigma2));
        return r;
    }

    std::array<double, 2> rates_es(double tau1, const std::vector<double> &p, const std::vector<cvec> &w,
                                   const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde, double sigma2)
    {
        return rates_es(tau1, p, es_gains(w, Hk, q_tilde), sigma2);
    }

    std::vector<double> rates_ts(const std::vector<double> &tau1, const std::vector<double> &p,
                                 const std::vector<cvec> &w, const std::vector<cmat> &Hk,
                                 const std::vector<cvec> &q_tilde, double sigma2)
    {
        const std::size_t K = Hk.size();
        if (tau1.size() != K || p.size() != K || w.size() != K || q_tilde.size() != K)
            throw StructureError("rates_ts: per-user inputs must match the number of users");
        std::vector<double> r;
        for (std::size_t k = 0; k < K; ++k)
        {
            if (p[k] < 0.0 || tau1[k] < 0.0)
                throw DomainError("rates_ts: powers and times must be >= 0");
            if (w[k].size() != Hk[k].rows() || q_tilde[k].size() != Hk[k].cols())
                throw StructureError("rates_ts: dimension mismatch");
            const double s = std::norm(w[k].dot(Hk[k] * q_tilde[k]));
            r.push_back(rate(tau1[k], p[k] * s / sigma2));
        }
        return r;
    }

    std::vector<double> best_powers_es(const std::vector<double> &energy, double tau1, const EsGains &g, double sigma2)
    {
        if (energy.size() != 2)
            throw StructureError("best_powers_es: exactly two users");
        if (!(tau1 > 0.0))
            return {0.0, 0.0};
        std::vector<double> p(2);
        p[user_r] = std::max(0.0, energy[user_r]) / tau1;
        const double cap = std::max(0.0, energy[user_t]) / tau1;
        if (g.tt <= 0.0)
        {
            p[user_t] = 0.0;
            return p;
        }
        // R_t = R_r  <=>  (tt/s2) rt x^2 + tt x - p_r rr = 0 for x = p_t.
        const double c = p[user_r] * g.rr;
        const double disc = g.tt * g.tt + 4.0 * (g.tt / sigma2) * g.rt * c;
        const double root = c > 0.0 ? 2.0 * c / (g.tt + std::sqrt(disc)) : 0.0;
        p[user_t] = std::min(cap, root);
        return p;
    }

    bool ConstraintReport::feasible() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck &c) { return c.ok; });
    }

    double ConstraintReport::max_residual() const
    {
        double m = 0.0;
        for (const auto &c : checks)
            m = std::max(m, std::isfinite(c.residual) ? c.residual : 1e300);
        return m;
    }

    std::string ConstraintReport::summary() const
    {
        std::ostringstream os;
        bool first = true;
        for (const auto &c : checks)
            if (!c.ok)
            {
                os << (first ? "" : "; ") << c.name << " residual " << c.residual;
                first = false;
            }
        return first ? std::string("feasible") : os.str();
    }

    ConstraintReport validate(const EsSolution &x, const Scenario &s, double threshold)
    {
        check_users(s, 2);
        ConstraintReport r;
        r.threshold = threshold;
        const auto &P = s.params;
        const int N = s.n_antennas();
        if (x.v.size() != N || x.w.size() != 2 || x.p.size() != 2 || x.profile.u.size() != 2 ||
            x.profile.q.size() != 2)
            throw StructureError("validate: incomplete energy-splitting solution");

        add(r, "time nonnegative", std::max(0.0, -std::min(x.tau0, x.tau1)) / P.T);
        add(r, "time budget", std::abs(x.tau0 + x.tau1 - P.T) / P.T);
        add(r, "HAP power", P.P_A > 0.0 ? rel_excess(x.v.squaredNorm(), P.P_A) : (x.v.squaredNorm() > 0 ? 1.0 : 0.0));
        for (int k = 0; k < 2; ++k)
        {
            if (x.w[k].size() != N)
                throw StructureError("validate: receiver dimension mismatch");
            add(r, "receiver norm " + std::to_string(k), std::abs(x.w[k].norm() - 1.0));
            add(r, "power nonnegative " + std::to_string(k), x.p[k] < 0.0 ? 1.0 : 0.0);
        }
        add_surface_checks(r, s, x.profile.u, "WPT", true);
        add_surface_checks(r, s, x.profile.q, "WIT", true);

        const auto ut = tilde(x.profile.u);
        const auto qt = tilde(x.profile.q);
        r.energies = energy_es(x.tau0, P.eta, s.combined, ut, x.v);
        for (int k = 0; k < 2; ++k)
            add(r, "energy causality " + std::to_string(k), rel_excess(x.tau1 * x.p[k], r.energies[k]));
        const auto rates = rates_es(x.tau1, x.p, x.w, s.combined.Hk, qt, P.sigma2);
        r.rates.assign(rates.begin(), rates.end());
        r.min_rate = std::min(rates[0], rates[1]);
        for (int k = 0; k < 2; ++k)
            add(r, "rate target " + std::to_string(k), rel_excess(x.gamma, rates[k]));
        return r;
    }

    ConstraintReport validate(const TsSolution &x, const Scenario &s, double threshold)
    {
        ConstraintReport r;
        r.threshold = threshold;
        const auto &P = s.params;
        const int K = s.n_users();
        const int N = s.n_antennas();
        if (static_cast<int>(x.tau0.size()) != K || static_cast<int>(x.tau1.size()) != K ||
            static_cast<int>(x.P.size()) != K || static_cast<int>(x.p.size()) != K ||
            static_cast<int>(x.v.size()) != K || static_cast<int>(x.w.size()) != K ||
            static_cast<int>(x.profile.u.size()) != K || static_cast<int>(x.profile.q.size()) != K)
            throw StructureError("validate: incomplete time-switching solution");

        double total = 0.0, negative = 0.0;
        for (int k = 0; k < K; ++k)
        {
            total += x.tau0[k] + x.tau1[k];
            negative = std::max(negative, std::max(-x.tau0[k], -x.tau1[k]));
        }
        add(r, "time nonnegative", std::max(0.0, negative) / P.T);
        add(r, "time budget", std::abs(total - P.T) / P.T);
        for (int k = 0; k < K; ++k)
        {
            const std::string id = std::to_string(k);
            if (x.v[k].size() != N || x.w[k].size() != N)
                throw StructureError("validate: beamformer dimension mismatch");
            add(r, "slot power budget " + id, P.P_A > 0.0 ? rel_excess(x.P[k], P.P_A) : (x.P[k] > 0 ? 1.0 : 0.0));
            add(r, "beam power " + id, x.P[k] > 0.0 ? rel_excess(x.v[k].squaredNorm(), x.P[k])
                                                     : (x.v[k].squaredNorm() > 0 ? 1.0 : 0.0));
            add(r, "receiver norm " + id, std::abs(x.w[k].norm() - 1.0));
            add(r, "power nonnegative " + id, (x.p[k] < 0.0 || x.P[k] < 0.0) ? 1.0 : 0.0);
        }
        add_surface_checks(r, s, x.profile.u, "WPT", false);
        add_surface_checks(r, s, x.profile.q, "WIT", false);

        r.energies = energy_ts(x.tau0, P.eta, s.combined, tilde(x.profile.u), x.v);
        for (int k = 0; k < K; ++k)
            add(r, "energy causality " + std::to_string(k), rel_excess(x.tau1[k] * x.p[k], r.energies[k]));
        r.rates = rates_ts(x.tau1, x.p, x.w, s.combined.Hk, tilde(x.profile.q), P.sigma2);
        r.min_rate = *std::min_element(r.rates.begin(), r.rates.end());
        for (int k = 0; k < K; ++k)
            add(r, "rate target " + std::to_string(k), rel_excess(x.gamma, r.rates[k]));
        return r;
    }
}
