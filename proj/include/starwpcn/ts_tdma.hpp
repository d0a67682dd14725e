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


#ifndef STARWPCN_TS_TDMA_HPP
#define STARWPCN_TS_TDMA_HPP

#include <cstdint>
#include <vector>

#include "starwpcn/model.hpp"
#include "starwpcn/sdp.hpp"

// Time-switching surface with TDMA uplink: matched-filter beams, per-user
// unit-modulus passive vectors and convex time allocation.
namespace starwpcn::ts
{
    struct Beamformers
    {
        std::vector<cvec> v; // transmit, ||v_k||^2 = P_k
        std::vector<cvec> w; // receive, unit norm
    };

    // v_k = sqrt(P_k) Gk^H u~_k / ||.||, w_k = Hk q~_k / ||.||.
    Beamformers mrt_beamformers(const std::vector<cmat> &Gk, const std::vector<cvec> &u_tilde,
                                const std::vector<cmat> &Hk, const std::vector<cvec> &q_tilde,
                                const std::vector<double> &P);

    struct PassiveOptions
    {
        int draws = 1000;
        std::uint64_t seed = 1;
        double tolerance = 1e-8;
    };

    struct PassiveResult
    {
        cvec vector;                  // unit modulus, last entry 1
        double value = 0.0;           // x^H R x at the returned vector
        double relaxation_bound = 0.0; // SDR optimum (equals value for the closed form)
        bool closed_form = false;
        int solver_iterations = 0;
        sdp::SolveStatus status = sdp::SolveStatus::optimal;
    };

    // Maximizes x^H R x over unit-modulus x with last entry 1. Rank-one R
    // (single HAP antenna) is solved in closed form; otherwise by the
    // unit-diagonal relaxation followed by Gaussian randomization.
    PassiveResult solve_ts_passive(const cmat &gram, const PassiveOptions &options = {});

    struct TimeSplit
    {
        double tau0 = 0.0;
        double tau1 = 0.0;
        double total = 0.0;
    };

    // Shortest tau0 + tau1 with tau1 log2(1 + a tau0 / tau1) >= gamma.
    TimeSplit min_total_time(double a, double gamma);

    struct TimeAllocation
    {
        std::vector<double> tau0;
        std::vector<double> tau1;
        double gamma = 0.0;
        int bisection_steps = 0;
    };

    // Max-min rate over per-user slot lengths summing to T, where user k
    // reaches tau1 log2(1 + a_k tau0 / tau1).
    TimeAllocation solve_time_allocation(const std::vector<double> &a, double T);

    // a_k = eta P ||Gk^H u~||^2 ||Hk q~||^2 / sigma2.
    double effective_gain(const cmat &Gk, const cvec &u_tilde, const cmat &Hk, const cvec &q_tilde, double P,
                          double eta, double sigma2);

    struct TsConfig
    {
        int draws = 1000;
        double tolerance = 1e-8;
        std::uint64_t seed = 1;
    };

    struct TsResult
    {
        TsSolution solution;
        std::vector<double> gains;
        std::vector<PassiveResult> downlink;
        std::vector<PassiveResult> uplink;
        ConstraintReport report;
        double wall_time = 0.0;
    };

    TsResult algorithm2(const Scenario &scenario, const TsConfig &config = {});
}

#endif
