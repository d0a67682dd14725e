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


#include "log_cuts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace starwpcn::es::detail
{
    void Affine::add_to(sdp::LinearExpr &e, double scale) const
    {
        for (const auto &[x, c] : traces)
            e.add_trace(x, scale * c);
        for (const auto &[s, c] : scalars)
            e.add_scalar(s, scale * c);
        e.add_constant(scale * constant);
    }

    double Affine::value(const sdp::SolveReport &r) const
    {
        double v = constant;
        for (const auto &[x, c] : traces)
            v += (c.cwiseProduct(r.value(x).transpose())).sum().real();
        for (const auto &[s, c] : scalars)
            v += c * r.value(s);
        return v;
    }

    void select_points(std::vector<double> &points, double center, std::size_t keep)
    {
        center = std::max(center, 1.0);
        points.erase(std::remove_if(points.begin(), points.end(), [](double x) { return !(x >= 1.0) || !std::isfinite(x); }),
                     points.end());
        points.push_back(center);
        std::sort(points.begin(), points.end(),
                  [&](double a, double b) { return std::abs(std::log(a / center)) < std::abs(std::log(b / center)); });
        // Near-duplicates add nothing but conditioning trouble.
        std::vector<double> out;
        for (double x : points)
        {
            if (out.size() >= keep)
                break;
            const bool dup = std::any_of(out.begin(), out.end(), [&](double y) { return std::abs(x - y) <= 1e-9 * y; });
            if (!dup)
                out.push_back(x);
        }
        points.swap(out);
    }

    namespace
    {
        constexpr double inv_ln2 = 1.4426950408889634;

        sdp::SolveReport solve_once(const sdp::ConicProgram &p, double tolerance, int &solves, double &time)
        {
            auto r = sdp::solve(p, {tolerance, 120});
            ++solves;
            time += r.wall_time;
            if (r.ok())
                return r;
            auto retry = sdp::solve(p, {std::max(tolerance, 1e-6), 200});
            ++solves;
            time += retry.wall_time;
            if (retry.ok())
                return retry;
            std::ostringstream os;
            os << "conic solve failed twice (" << sdp::to_string(r.status) << ", " << sdp::to_string(retry.status)
               << ")";
            throw SolverError(os.str());
        }
    }

    CutSolve solve_with_cuts(const sdp::ConicProgram &base, std::vector<LogConstraint> &logs, double tolerance,
                             int max_rounds)
    {
        CutSolve out;
        for (;;)
        {
            sdp::ConicProgram p = base;
            for (const auto &lc : logs)
            {
                // log2(a) <= log2(x0) + (a - x0) / (x0 ln 2) turns
                // weight log2(a) >= bound into a linear constraint.
                for (double x0 : *lc.points)
                {
                    sdp::LinearExpr e;
                    lc.bound.add_to(e, 1.0);
                    lc.argument.add_to(e, -lc.weight * inv_ln2 / x0);
                    p.add_constraint(e, sdp::Relation::less_equal, lc.weight * (std::log2(x0) - inv_ln2), lc.label);
                }
            }
            out.report = solve_once(p, tolerance, out.solves, out.solver_time);
            ++out.rounds;

            out.violation = 0.0;
            bool added = false;
            for (auto &lc : logs)
            {
                const double a = std::max(lc.argument.value(out.report), 1.0);
                const double b = lc.bound.value(out.report);
                const double gap = b - lc.weight * std::log2(a);
                out.violation = std::max(out.violation, gap);
                if (gap > 1e-7 * (1.0 + std::abs(b)))
                {
                    lc.points->push_back(a);
                    added = true;
                }
            }
            if (!added)
            {
                out.refined = true;
                return out;
            }
            if (out.rounds >= max_rounds)
            {
                out.refined = false;
                return out;
            }
        }
    }
}
