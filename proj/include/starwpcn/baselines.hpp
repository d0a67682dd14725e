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

#ifndef STARWPCN_BASELINES_HPP
#define STARWPCN_BASELINES_HPP

#include <optional>
#include <string>

#include "starwpcn/es_noma.hpp"
#include "starwpcn/model.hpp"
#include "starwpcn/ts_tdma.hpp"

// Comparison schemes: direct links only, a conventional reflecting surface,
// and energy splitting with randomized surface recovery.
namespace starwpcn::baselines
{
    enum class Strategy
    {
        noma, // energy splitting, one WPT and one uplink phase
        tdma  // time switching, one slot pair per user
    };

    enum class BaselineKind
    {
        no_ris,
        conventional_ris,
        es_noma_gr
    };

    const char *to_string(Strategy s);
    const char *to_string(BaselineKind k);
    std::optional<Strategy> parse_strategy(const std::string &s);
    std::optional<BaselineKind> parse_baseline(const std::string &s);

    // Either pipeline's result together with the scenario it was run on.
    struct Outcome
    {
        Strategy strategy = Strategy::noma;
        Scenario scenario;
        std::optional<es::EsResult> es;
        std::optional<ts::TsResult> ts;

        double gamma() const;
        const ConstraintReport &report() const;
        double wall_time() const;
    };

    // Same users and direct links, surface removed (M = 0).
    Scenario without_surface(const Scenario &scenario);

    // Same users and direct links, a reflect-only surface at `position`
    // facing -y. Throws DomainError when a user sits behind it.
    Scenario with_conventional_surface(const Scenario &scenario, Point3 position = {10.0, 1.0, 0.0});

    // Runs the chosen pipeline on the scenario as given.
    Outcome solve(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config = {},
                  const ts::TsConfig &ts_config = {});

    Outcome solve_no_ris(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config = {},
                         const ts::TsConfig &ts_config = {});
    Outcome solve_conventional_ris(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config = {},
                                   const ts::TsConfig &ts_config = {}, Point3 position = {10.0, 1.0, 0.0});
    es::EsResult solve_es_noma_gr(const Scenario &scenario, es::EsConfig config = {});
}

#endif
