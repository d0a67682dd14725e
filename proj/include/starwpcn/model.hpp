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


#ifndef STARWPCN_MODEL_HPP
#define STARWPCN_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "starwpcn/channel.hpp"
#include "starwpcn/types.hpp"

// Decision variables, exact energy and rate evaluators, and constraint
// validation for both transmission strategies. Rates are in bit/s/Hz
// accumulated over the normalized block (so a rate times the bandwidth is
// the throughput in bit/s).
namespace starwpcn
{
    // Two-user indices used by the energy-splitting strategy.
    inline constexpr int user_t = 0;
    inline constexpr int user_r = 1;

    struct SystemParams
    {
        double P_A = 5.0;      // W
        double eta = 0.8;      // harvesting efficiency
        double sigma2 = 1e-12; // W, -90 dBm
        double T = 1.0;        // s

        void validate() const;
    };

    double dbm_to_watt(double dbm);

    enum class SurfaceKind
    {
        star,         // simultaneous transmit/reflect surface
        reflect_only, // conventional surface, one shared unit-modulus vector
        none          // direct links only
    };

    const char *to_string(SurfaceKind s);

    struct Scenario
    {
        SystemParams params;
        ScenarioGeometry geometry;
        FadingParams fading;
        SurfaceKind surface = SurfaceKind::star;
        std::uint64_t seed = 0;
        ChannelSet channels;
        CombinedChannels combined;

        int n_users() const { return combined.n_users(); }
        int n_antennas() const { return combined.n_antennas(); }
        int n_elements() const { return combined.n_elements(); }
    };

    // Draws the channels for `geometry` and assembles the combined form.
    // With SurfaceKind::none the surface rows/columns are dropped.
    Scenario make_scenario(const ScenarioGeometry &geometry, const FadingParams &fading, const SystemParams &params,
                           std::uint64_t seed, SurfaceKind surface = SurfaceKind::star);

    // [x; 1]
    cvec append_one(const cvec &x);

    // Per-element tuning vectors of the energy-splitting surface, one per
    // user, for the WPT phase (u) and the WIT phase (q); length M.
    struct StarEsProfile
    {
        std::vector<cvec> u;
        std::vector<cvec> q;
    };

    // Unit-modulus tuning vectors, one per user and phase; length M.
    struct StarTsProfile
    {
        std::vector<cvec> u;
        std::vector<cvec> q;
    };

    struct EsSolution
    {
        double tau0 = 0.0;
        double tau1 = 0.0;
        cvec v;
        std::vector<cvec> w;
        StarEsProfile profile;
        std::vector<double> p;
        double gamma = 0.0;
    };

    struct TsSolution
    {
        std::vector<double> tau0;
        std::vector<double> tau1;
        std::vector<double> P; // HAP power in each user's WPT slot
        std::vector<double> p; // user transmit power in its WIT slot
        std::vector<cvec> v;
        std::vector<cvec> w;
        StarTsProfile profile;
        double gamma = 0.0;
    };

    // E_k = tau0 * eta * |u~_k^H Gk v|^2.
    std::vector<double> energy_es(double tau0, double eta, const CombinedChannels &combined,
                                  const std::vector<cvec> &u_tilde, const cvec &v);

    // E_k = tau0_k * eta * |u~_k^H Gk v_k|^2 (own slot only).
    std::vector<double> energy_ts(const std::vector<double> &tau0, double eta, const CombinedChannels &combined,
                                  const std::vector<cvec> &u_tilde, const std::vector<cvec> &v);

    // Received signal powers |w_i^H H_j q~_j|^2 entering the two-user rates.
    struct EsGains
    {
        double tt = 0.0; // user t at its own receiver
        double rr = 0.0; // user r at its own receiver
        double rt = 0.0; // user t leaking into user r's receiver
    };

    EsGains es_gains(const std::vector<cvec> &w, const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde);

    // Two-user uplink with successive cancellation, user r decoded first.
    // Returns {R_t, R_r}.
    std::array<double, 2> rates_es(double tau1, const std::vector<double> &p, const std::vector<cvec> &w,
                                   const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde, double sigma2);
    std::array<double, 2> rates_es(double tau1, const std::vector<double> &p, const EsGains &g, double sigma2);

    // Interference-free per-user rates.
    std::vector<double> rates_ts(const std::vector<double> &tau1, const std::vector<double> &p,
                                 const std::vector<cvec> &w, const std::vector<cmat> &Hk,
                                 const std::vector<cvec> &q_tilde, double sigma2);

    // Max-min optimal powers for fixed receivers and surface: user r spends
    // all its energy, user t spends the smaller of its energy and the level
    // at which both rates coincide.
    std::vector<double> best_powers_es(const std::vector<double> &energy, double tau1, const EsGains &g, double sigma2);

    struct ConstraintCheck
    {
        std::string name;
        double residual = 0.0; // relative
        bool ok = true;
    };

    struct ConstraintReport
    {
        std::vector<ConstraintCheck> checks;
        std::vector<double> rates;
        std::vector<double> energies;
        double min_rate = 0.0;
        double threshold = 1e-6;

        bool feasible() const;
        double max_residual() const;
        std::string summary() const;
    };

    // Checks every constraint of the respective problem. The surface kind of
    // the scenario selects the surface constraints: amplitude splitting for
    // the energy-splitting surface, unit modulus (shared vector across users)
    // for the reflect-only surface, nothing without a surface.
    ConstraintReport validate(const EsSolution &solution, const Scenario &scenario, double threshold = 1e-6);
    ConstraintReport validate(const TsSolution &solution, const Scenario &scenario, double threshold = 1e-6);
}

#endif
