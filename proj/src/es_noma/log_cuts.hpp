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


#ifndef STARWPCN_ES_NOMA_LOG_CUTS_HPP
#define STARWPCN_ES_NOMA_LOG_CUTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "starwpcn/sdp.hpp"

// Outer approximation of constraints weight * log2(arg) >= bound by tangent
// planes of log2, refined at the solution until the true constraint holds.
namespace starwpcn::es::detail
{
    struct Affine
    {
        double constant = 0.0;
        std::vector<std::pair<sdp::MatrixVar, cmat>> traces;
        std::vector<std::pair<sdp::ScalarVar, double>> scalars;

        Affine &add(double c)
        {
            constant += c;
            return *this;
        }
        Affine &trace(sdp::MatrixVar x, const cmat &c)
        {
            traces.emplace_back(x, c);
            return *this;
        }
        Affine &scalar(sdp::ScalarVar s, double c)
        {
            scalars.emplace_back(s, c);
            return *this;
        }

        // e += scale * this
        void add_to(sdp::LinearExpr &e, double scale) const;
        double value(const sdp::SolveReport &r) const;
    };

    struct LogConstraint
    {
        Affine argument; // must stay >= 1 on the feasible set
        Affine bound;
        double weight = 1.0;
        std::vector<double> *points = nullptr; // tangent points, grown in place
        std::string label;
    };

    struct CutSolve
    {
        sdp::SolveReport report;
        int solves = 0;
        int rounds = 0;
        double violation = 0.0; // largest bound - weight log2(arg) at exit
        double solver_time = 0.0;
        bool refined = true; // violation within tolerance
    };

    // Keeps at most `keep` points, preferring those closest (in log scale)
    // to `center`, and always includes `center` itself.
    void select_points(std::vector<double> &points, double center, std::size_t keep = 16);

    // Solves `base` plus the tangent cuts of every log constraint. Throws
    // SolverError if the solver fails twice on one round (second attempt at
    // a relaxed tolerance).
    CutSolve solve_with_cuts(const sdp::ConicProgram &base, std::vector<LogConstraint> &logs, double tolerance,
                             int max_rounds);
}

#endif
