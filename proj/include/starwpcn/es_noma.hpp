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


#ifndef STARWPCN_ES_NOMA_HPP
#define STARWPCN_ES_NOMA_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "starwpcn/model.hpp"
#include "starwpcn/sdp.hpp"

// Energy-splitting surface with two-user uplink NOMA: outer search over the
// WPT duration and an inner block coordinate ascent over receivers, energy
// beam, downlink surface and uplink surface.
namespace starwpcn::es
{
    // How the passive blocks recover vectors from their lifted matrices.
    enum class PassiveMethod
    {
        penalty,      // nuclear-minus-spectral penalty driven to rank one
        randomization // plain relaxation followed by Gaussian randomization
    };

    struct EsConfig
    {
        double tau_step = 0.1;
        double inner_tolerance = 1e-5;   // stop when gamma gains less than this
        double penalty_tolerance = 1e-5; // nuclear minus spectral norm
        double penalty_initial = 1e-4;
        double penalty_growth = 10.0;
        double penalty_cap = 1e6;
        int max_penalty_rounds = 16;
        int max_inner_iterations = 30;
        double rank_one_threshold = 1e-3; // energy beam, relative residual
        PassiveMethod passive = PassiveMethod::penalty;
        int draws = 1000;
        std::uint64_t seed = 1;
        double solver_tolerance = 1e-8;
        int max_cut_rounds = 12;

        void validate() const;
    };

    // Iterate of the inner loop. The lifted matrices V, W_k, U~_k, Q~_k are
    // kept through their rank-one factors.
    struct BcdState
    {
        int iteration = 0;
        double tau0 = 0.0;
        double tau1 = 0.0;
        cvec v;
        std::vector<cvec> w;       // unit norm
        std::vector<cvec> u_tilde; // length M + 1, last entry 1
        std::vector<cvec> q_tilde;
        std::vector<double> p;
        double gamma = 0.0; // exact min rate at this iterate

        // Penalty factors reached by the latest passive blocks.
        double xi = 0.0;
        double xi_uplink = 0.0;
        // Expansion points of the latest surrogate rate bounds.
        double pt_local = 0.0;
        double A_local = 0.0;
        double B_local = 0.0;
        // Tangent points of log2 kept between solves.
        std::vector<double> cuts_t;
        std::vector<double> cuts_r;
    };

    enum class Block
    {
        receivers,
        energy,
        downlink,
        uplink
    };

    const char *to_string(Block b);

    // One block update of the inner loop.
    struct TraceRecord
    {
        double tau0 = 0.0;
        int iteration = 0;
        Block block = Block::receivers;
        double gamma = 0.0;           // after the update (accepted or not)
        double candidate_gamma = 0.0; // exact value of the block's proposal
        bool accepted = true;
        double relaxation_bound = 0.0; // objective of the relaxed program
        double surrogate_score = 0.0;  // proposal scored by the same surrogate
        bool bound_ok = true;
        double rank_one_residual = 0.0; // energy block: relative, passive: absolute
        bool rank_one_ok = true;
        double penalty = 0.0;
        int penalty_rounds = 0;
        bool penalty_converged = true;
        int solves = 0;
        int cut_rounds = 0;
        double solver_time = 0.0;
        std::string note;
    };

    // Normalized receivers for the uplink with user r decoded first:
    // w_t ~ (p_t h_t h_t^H + s2 I)^-1 h_t,
    // w_r ~ (p_r h_r h_r^H + p_t h_t h_t^H + s2 I)^-1 h_r, h_k = Hk q~_k.
    std::array<cvec, 2> mmse_receivers(const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde,
                                       const std::vector<double> &p, double sigma2);

    // First-order lower bound on R_r in the user-t power around pt_local
    // (gains fixed).
    double rate_r_power_bound(double tau1, double pt, double pr, const EsGains &g, double sigma2, double pt_local);

    // Tangent-plane lower bound of tau1 log2(1 + 1/(A B)) at (A0, B0).
    double rate_r_auxiliary_bound(double tau1, double A, double B, double A0, double B0);

    // max over p_t <= E_t / tau1, p_r = E_r / tau1 of min(R_t, power bound of
    // R_r); the value the energy and downlink blocks maximize.
    double surrogate_gamma(const std::vector<double> &energy, double tau1, const EsGains &g, double sigma2,
                           double pt_local);

    // Exact min rate of the state's variables.
    double exact_gamma(const BcdState &state, const Scenario &scenario);

    // Random phases with an even amplitude split (shared unit-modulus vector
    // without energy splitting), the energy beam matched to the summed
    // cascaded channels, full use of harvested energy, and MMSE receivers.
    BcdState initial_state(const Scenario &scenario, double tau0, const EsConfig &config);

    TraceRecord update_receivers(BcdState &state, const Scenario &scenario);
    TraceRecord solve_energy_block(BcdState &state, const Scenario &scenario, const EsConfig &config);
    TraceRecord solve_downlink_passive_block(BcdState &state, const Scenario &scenario, const EsConfig &config);
    TraceRecord solve_uplink_passive_block(BcdState &state, const Scenario &scenario, const EsConfig &config);

    struct InnerResult
    {
        EsSolution solution;
        ConstraintReport report;
        std::vector<TraceRecord> trace;
        std::vector<double> gamma_history; // after each full pass, starting at the initial point
        int iterations = 0;
        bool converged = false;
    };

    InnerResult bcd_inner(double tau0, BcdState init, const Scenario &scenario, const EsConfig &config);

    struct TauPoint
    {
        double tau0 = 0.0;
        double gamma = 0.0;
        bool ok = false;
        int iterations = 0;
        bool converged = false;
        std::string error;
    };

    struct EsResult
    {
        EsSolution solution;
        ConstraintReport report;
        std::vector<TauPoint> grid;
        std::vector<TraceRecord> trace; // every block of every grid point
        int best_index = -1;
        double wall_time = 0.0;
    };

    // Interior grid {step, 2 step, ...} strictly inside (0, 1).
    std::vector<double> tau_grid(double step);

    EsResult algorithm1(const Scenario &scenario, const EsConfig &config = {});
}

#endif
