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

#include "starwpcn/baselines.hpp"

namespace starwpcn::baselines
{
    const char *to_string(Strategy s) { return s == Strategy::noma ? "noma" : "tdma"; }

    const char *to_string(BaselineKind k)
    {
        switch (k)
        {
        case BaselineKind::no_ris:
            return "no_ris";
        case BaselineKind::conventional_ris:
            return "conventional_ris";
        case BaselineKind::es_noma_gr:
            return "es_noma_gr";
        }
        return "?";
    }

    std::optional<Strategy> parse_strategy(const std::string &s)
    {
        if (s == "noma")
            return Strategy::noma;
        if (s == "tdma")
            return Strategy::tdma;
        return std::nullopt;
    }

    std::optional<BaselineKind> parse_baseline(const std::string &s)
    {
        for (auto k : {BaselineKind::no_ris, BaselineKind::conventional_ris, BaselineKind::es_noma_gr})
            if (s == to_string(k))
                return k;
        return std::nullopt;
    }

    double Outcome::gamma() const { return es ? es->solution.gamma : ts->solution.gamma; }

    const ConstraintReport &Outcome::report() const { return es ? es->report : ts->report; }

    double Outcome::wall_time() const { return es ? es->wall_time : ts->wall_time; }

    Scenario without_surface(const Scenario &scenario)
    {
        Scenario s = scenario;
        s.surface = SurfaceKind::none;
        s.geometry.n_elements = 0;
        const int N = scenario.n_antennas();
        auto &ch = s.channels;
        ch.G = cmat(0, N);
        ch.H = cmat(N, 0);
        for (auto &g : ch.g_s)
            g = cvec(0);
        for (auto &h : ch.h_s)
            h = crow(0);
        s.combined = direct_only(scenario.combined);
        return s;
    }

    Scenario with_conventional_surface(const Scenario &scenario, Point3 position)
    {
        auto g = scenario.geometry;
        if (g.n_elements == 0)
            throw DomainError("conventional surface needs at least one element");
        g = with_reflect_only_surface(g, position);
        // Per-link random streams keep the direct links of the same seed.
        return make_scenario(g, scenario.fading, scenario.params, scenario.seed, SurfaceKind::reflect_only);
    }

    Outcome solve(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config,
                  const ts::TsConfig &ts_config)
    {
        Outcome out;
        out.strategy = strategy;
        out.scenario = scenario;
        if (strategy == Strategy::noma)
            out.es = es::algorithm1(scenario, es_config);
        else
            out.ts = ts::algorithm2(scenario, ts_config);
        return out;
    }

    Outcome solve_no_ris(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config,
                         const ts::TsConfig &ts_config)
    {
        return solve(without_surface(scenario), strategy, es_config, ts_config);
    }

    Outcome solve_conventional_ris(const Scenario &scenario, Strategy strategy, const es::EsConfig &es_config,
                                   const ts::TsConfig &ts_config, Point3 position)
    {
        return solve(with_conventional_surface(scenario, position), strategy, es_config, ts_config);
    }

    es::EsResult solve_es_noma_gr(const Scenario &scenario, es::EsConfig config)
    {
        config.passive = es::PassiveMethod::randomization;
        return es::algorithm1(scenario, config);
    }
}
