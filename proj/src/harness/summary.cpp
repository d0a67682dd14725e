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

#include "starwpcn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

namespace starwpcn::harness
{
    using json = nlohmann::json;

    namespace
    {
        std::string num(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", x);
            return buf;
        }

        // Seed-averaged gamma per scheme along the axis (ascending).
        using Curve = std::map<double, double>;

        std::map<std::string, Curve> curves(const Summary &s)
        {
            std::map<std::string, Curve> out;
            for (const auto &r : s.rows)
                if (r.count > r.failures)
                    out[r.scheme][r.axis] = r.mean;
            return out;
        }

        void add(Summary &s, std::string name, bool pass, std::string detail)
        {
            s.trends.push_back({std::move(name), pass, std::move(detail)});
        }

        void monotone(Summary &s, const std::map<std::string, Curve> &c, bool increasing, const std::string &what)
        {
            for (const auto &[scheme, curve] : c)
            {
                if (curve.size() < 2)
                    continue;
                bool ok = true;
                std::string detail;
                double prev = 0.0;
                bool first = true;
                for (const auto &[a, g] : curve)
                {
                    if (!first && (increasing ? g < prev : g > prev))
                        ok = false;
                    detail += (first ? "" : " ") + num(a) + ":" + num(g);
                    prev = g;
                    first = false;
                }
                add(s, scheme + (increasing ? " non-decreasing in " : " non-increasing in ") + what, ok, detail);
            }
        }

        // a beats b at every shared axis value.
        void dominates(Summary &s, const std::map<std::string, Curve> &c, const std::string &a, const std::string &b,
                       bool strict)
        {
            auto ia = c.find(a), ib = c.find(b);
            if (ia == c.end() || ib == c.end())
                return;
            bool ok = true, any = false;
            std::string detail;
            for (const auto &[x, ga] : ia->second)
            {
                auto it = ib->second.find(x);
                if (it == ib->second.end())
                    continue;
                any = true;
                if (strict ? !(ga > it->second) : !(ga >= it->second))
                    ok = false;
                detail += (detail.empty() ? "" : " ") + num(x) + ":" + num(ga) + " vs " + num(it->second);
            }
            if (any)
                add(s, a + (strict ? " > " : " >= ") + b, ok, detail);
        }

        // Gap a - b at the largest shared axis value exceeds the gap at the smallest.
        void widening(Summary &s, const std::map<std::string, Curve> &c, const std::string &a, const std::string &b)
        {
            auto ia = c.find(a), ib = c.find(b);
            if (ia == c.end() || ib == c.end())
                return;
            std::vector<std::pair<double, double>> gaps;
            for (const auto &[x, ga] : ia->second)
                if (auto it = ib->second.find(x); it != ib->second.end())
                    gaps.push_back({x, ga - it->second});
            if (gaps.size() < 2)
                return;
            const auto lo = gaps.front(), hi = gaps.back();
            add(s, "gap " + a + " - " + b + " widens along the axis", hi.second > lo.second,
                num(lo.first) + ":" + num(lo.second) + " -> " + num(hi.first) + ":" + num(hi.second));
        }

        void unimodal(Summary &s, const std::map<std::string, Curve> &c)
        {
            for (const auto &[scheme, curve] : c)
            {
                if (curve.size() < 3)
                    continue;
                std::vector<double> g;
                for (const auto &[a, v] : curve)
                    g.push_back(v);
                const auto peak = std::max_element(g.begin(), g.end()) - g.begin();
                bool ok = true;
                for (long i = 1; i <= peak; ++i)
                    ok = ok && g[i] >= g[i - 1];
                for (std::size_t i = peak + 1; i < g.size(); ++i)
                    ok = ok && g[i] <= g[i - 1];
                add(s, scheme + " unimodal in the WPT duration", ok, "peak at index " + std::to_string(peak));
            }
        }

        // Surface nearer user t (x > 10) beats its mirror position nearer user r.
        void nearer_t(Summary &s, const std::map<std::string, Curve> &c)
        {
            for (const auto &[scheme, curve] : c)
                for (const auto &[x, g] : curve)
                {
                    if (x <= 10.0)
                        continue;
                    const double mirror = 20.0 - x;
                    auto it = std::find_if(curve.begin(), curve.end(),
                                           [&](const auto &kv) { return std::abs(kv.first - mirror) < 1e-9; });
                    if (it == curve.end())
                        continue;
                    add(s, scheme + " x=" + num(x) + " beats x=" + num(mirror), g > it->second,
                        num(g) + " vs " + num(it->second));
                }
        }

        void stabilizes(Summary &s, const std::vector<ResultRecord> &records, int within)
        {
            std::map<std::string, std::pair<int, int>> count; // scheme|axis -> (stable, total)
            for (const auto &r : records)
            {
                if (!r.ok || r.trace.empty())
                    continue;
                const double last = r.trace.back();
                const std::size_t k = std::min<std::size_t>(within, r.trace.size()) - 1;
                // Within 1% of the final value after `within` passes.
                const bool ok = r.trace[k] >= 0.99 * last;
                auto &c = count[r.scheme + " M=" + num(r.axis)];
                c.first += ok;
                ++c.second;
            }
            for (const auto &[key, c] : count)
                add(s, key + " within 1% of final after " + std::to_string(within) + " iterations",
                    c.first == c.second, std::to_string(c.first) + "/" + std::to_string(c.second) + " seeds");
        }
    }

    bool Summary::all_trends_pass() const
    {
        return std::all_of(trends.begin(), trends.end(), [](const TrendCheck &t) { return t.pass; });
    }

    Summary summarize(const std::vector<ResultRecord> &records)
    {
        Summary s;
        if (records.empty())
            return s;
        s.spec_hash = records.front().spec_hash;
        std::map<std::pair<std::string, double>, std::vector<const ResultRecord *>> groups;
        std::vector<std::string> order;
        for (const auto &r : records)
        {
            if (r.spec_hash != s.spec_hash)
                throw DomainError("records from different specs (" + s.spec_hash + ", " + r.spec_hash + ")");
            if (std::find(order.begin(), order.end(), r.scheme) == order.end())
                order.push_back(r.scheme);
            groups[{r.scheme, r.axis}].push_back(&r);
            s.all_cells_ok = s.all_cells_ok && r.ok;
        }
        for (const auto &scheme : order)
            for (const auto &[key, rs] : groups)
            {
                if (key.first != scheme)
                    continue;
                SummaryRow row;
                row.scheme = scheme;
                row.axis = key.second;
                row.count = static_cast<int>(rs.size());
                double sum = 0.0, sq = 0.0;
                int n = 0;
                for (const auto *r : rs)
                {
                    if (!r->ok)
                    {
                        ++row.failures;
                        continue;
                    }
                    sum += r->gamma;
                    ++n;
                }
                row.mean = n ? sum / n : 0.0;
                for (const auto *r : rs)
                    if (r->ok)
                        sq += (r->gamma - row.mean) * (r->gamma - row.mean);
                row.stddev = n ? std::sqrt(sq / n) : 0.0;
                s.rows.push_back(row);
            }
        return s;
    }

    Summary summarize(const std::vector<ResultRecord> &records, const ExperimentSpec &spec)
    {
        auto s = summarize(records);
        if (!spec.trends || records.empty())
            return s;
        const auto c = curves(s);
        const std::vector<std::string> strategies{"noma", "tdma"};
        switch (spec.figure)
        {
        case Figure::convergence:
            stabilizes(s, records, 10);
            break;
        case Figure::single_antenna:
            dominates(s, c, "star_tdma", "star_noma", true);
            break;
        case Figure::vs_N:
        case Figure::vs_M:
            monotone(s, c, true, spec.figure == Figure::vs_N ? "N" : "M");
            for (const auto &st : strategies)
            {
                dominates(s, c, "star_" + st, "conventional_ris_" + st, true);
                dominates(s, c, "conventional_ris_" + st, "no_ris_" + st, true);
            }
            dominates(s, c, "star_noma", "es_noma_gr", false);
            dominates(s, c, "star_noma", "star_tdma", true);
            if (spec.figure == Figure::vs_M)
            {
                widening(s, c, "star_noma", "star_tdma");
                widening(s, c, "star_noma", "es_noma_gr");
            }
            break;
        case Figure::vs_tau0:
            unimodal(s, c);
            break;
        case Figure::vs_location:
            nearer_t(s, c);
            break;
        case Figure::vs_users_tdma:
            monotone(s, c, false, "users");
            break;
        }
        return s;
    }

    std::string summary_json(const Summary &s)
    {
        json j;
        j["spec_hash"] = s.spec_hash;
        j["all_cells_ok"] = s.all_cells_ok;
        j["all_trends_pass"] = s.all_trends_pass();
        j["rows"] = json::array();
        for (const auto &r : s.rows)
            j["rows"].push_back({{"scheme", r.scheme},
                                 {"axis", r.axis},
                                 {"count", r.count},
                                 {"failures", r.failures},
                                 {"mean", r.mean},
                                 {"std", r.stddev}});
        j["trends"] = json::array();
        for (const auto &t : s.trends)
            j["trends"].push_back({{"name", t.name}, {"pass", t.pass}, {"detail", t.detail}});
        return j.dump(2);
    }
}
