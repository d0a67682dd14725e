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

#ifndef STARWPCN_SDP_HPP
#define STARWPCN_SDP_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starwpcn/random.hpp"
#include "starwpcn/types.hpp"

// Solver-agnostic semidefinite programs over complex Hermitian PSD matrices
// and scalar variables, plus the rank-one utilities shared by the
// beamforming subproblems.
namespace starwpcn::sdp
{
    struct MatrixVar
    {
        int index = -1;
    };

    struct ScalarVar
    {
        int index = -1;
    };

    enum class Relation
    {
        less_equal,
        equal,
        greater_equal
    };

    enum class Sense
    {
        maximize,
        minimize
    };

    // One Hermitian coefficient acting on a matrix variable through
    // Re Tr(C X). Either dense, or a short list of entries whose Hermitian
    // mirror is implied.
    struct TraceTerm
    {
        int var = -1;
        bool dense = false;
        cmat coeff;
        struct Entry
        {
            int row;
            int col;
            cdouble value;
        };
        std::vector<Entry> entries; // full list, mirrors included
    };

    struct ScalarTerm
    {
        int var = -1;
        double coeff = 0.0;
    };

    // Affine expression in the program variables.
    class LinearExpr
    {
    public:
        LinearExpr() = default;

        // + Re Tr(C X), C Hermitian.
        LinearExpr &add_trace(MatrixVar x, const cmat &coeff);
        // + weight * X(i,i)
        LinearExpr &add_diag(MatrixVar x, int i, double weight = 1.0);
        // + weight * Re X(i,j)
        LinearExpr &add_real_part(MatrixVar x, int i, int j, double weight = 1.0);
        // + weight * Im X(i,j)
        LinearExpr &add_imag_part(MatrixVar x, int i, int j, double weight = 1.0);
        LinearExpr &add_scalar(ScalarVar s, double coeff);
        LinearExpr &add_constant(double c);

        const std::vector<TraceTerm> &trace_terms() const { return trace_; }
        const std::vector<ScalarTerm> &scalar_terms() const { return scalar_; }
        double constant() const { return constant_; }

    private:
        std::vector<TraceTerm> trace_;
        std::vector<ScalarTerm> scalar_;
        double constant_ = 0.0;
    };

    struct Constraint
    {
        LinearExpr lhs;
        Relation relation = Relation::equal;
        double rhs = 0.0;
        std::string label;
    };

    class ConicProgram
    {
    public:
        MatrixVar add_psd(std::string name, int dim);
        ScalarVar add_scalar(std::string name, bool nonnegative = true);

        void set_objective(LinearExpr objective, Sense sense = Sense::maximize);
        int add_constraint(LinearExpr lhs, Relation relation, double rhs, std::string label = {});

        int num_psd() const { return static_cast<int>(psd_dims_.size()); }
        int num_scalars() const { return static_cast<int>(scalar_names_.size()); }
        int psd_dim(MatrixVar x) const { return psd_dims_.at(x.index); }
        const std::string &psd_name(int i) const { return psd_names_.at(i); }
        const std::string &scalar_name(int i) const { return scalar_names_.at(i); }
        bool scalar_nonnegative(int i) const { return scalar_nonneg_.at(i); }
        const std::vector<int> &psd_dims() const { return psd_dims_; }
        const LinearExpr &objective() const { return objective_; }
        Sense sense() const { return sense_; }
        const std::vector<Constraint> &constraints() const { return constraints_; }

        // Throws StructureError on undeclared variables or dimension mismatch.
        void check() const;

        // Human-readable dump for offline inspection.
        void dump(std::ostream &os) const;

    private:
        void check_expr(const LinearExpr &e, const std::string &where) const;

        std::vector<int> psd_dims_;
        std::vector<std::string> psd_names_;
        std::vector<std::string> scalar_names_;
        std::vector<bool> scalar_nonneg_;
        LinearExpr objective_;
        Sense sense_ = Sense::maximize;
        std::vector<Constraint> constraints_;
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        unbounded,
        numerical_failure
    };

    const char *to_string(SolveStatus s);

    struct SolverOptions
    {
        double tolerance = 1e-8;
        int max_iterations = 120;
        // A stalled run whose best iterate meets this level is reported as
        // optimal with reduced_accuracy set.
        double acceptable_tolerance = 1e-6;
    };

    struct SolveReport
    {
        SolveStatus status = SolveStatus::numerical_failure;
        double objective = 0.0;
        // Objective of the dual iterate in user units; bounds the optimum
        // from above for maximization (below for minimization) up to the
        // dual infeasibility.
        double dual_objective = 0.0;
        std::vector<cmat> matrices;
        std::vector<double> scalars;
        std::vector<double> duals; // one per constraint, user scaling
        int iterations = 0;
        double wall_time = 0.0;
        double primal_infeasibility = 0.0;
        double dual_infeasibility = 0.0;
        double relative_gap = 0.0;
        bool reduced_accuracy = false;

        bool ok() const { return status == SolveStatus::optimal; }
        const cmat &value(MatrixVar x) const { return matrices.at(x.index); }
        double value(ScalarVar s) const { return scalars.at(s.index); }
        double evaluate(const LinearExpr &e) const;
    };

    // Largest violation of any constraint of `program` by the assignment in
    // `report`, each measured relative to max(1, |rhs|, scale of the row).
    double max_constraint_violation(const ConicProgram &program, const SolveReport &report);

    // Primal-dual interior point method (HKM direction, Mehrotra
    // predictor-corrector) working directly on Hermitian blocks.
    SolveReport solve(const ConicProgram &program, const SolverOptions &options = {});

    // Real symmetric embedding X -> [Re X, -Im X; Im X, Re X] of every
    // matrix variable; objective and constraint values are preserved.
    ConicProgram to_real_embedding(const ConicProgram &program);
    cmat from_real_embedding(const cmat &embedded);

    struct RankOneResidual
    {
        double value = 0.0;       // (nuclear - spectral) / spectral
        double absolute = 0.0;    // nuclear - spectral
        bool zero_matrix = false; // spectral norm vanished; value reported as 0
    };

    RankOneResidual rank_one_residual(const cmat &x);

    // Dominant eigenvector scaled by sqrt(top eigenvalue). With
    // anchor_last_entry the vector is rotated and rescaled so its last entry
    // is exactly 1. Throws SolverError when the residual exceeds threshold.
    cvec extract_vector(const cmat &x, bool anchor_last_entry, double threshold = 1e-3);

    using Projector = std::function<std::optional<cvec>(const cvec &)>;
    using Scorer = std::function<double(const cvec &)>;

    struct RandomizationResult
    {
        cvec best;
        double score = 0.0;
        int feasible_draws = 0;
    };

    // Draws `draws` vectors from CN(0, X), projects each onto the feasible
    // set and keeps the best-scoring candidate. Throws SolverError if no draw
    // survives projection.
    RandomizationResult gaussian_randomize(const cmat &x, int draws, const Projector &projector,
                                           const Scorer &scorer, std::uint64_t seed);

    // Samples of CN(0, X) through a Hermitian square root.
    class GaussianSampler
    {
    public:
        explicit GaussianSampler(const cmat &x);
        cvec draw(Rng &rng) const;

    private:
        cmat factor_;
    };

    // Projects every entry onto the unit circle and anchors the last entry
    // to 1. Returns nullopt when any entry is (numerically) zero.
    std::optional<cvec> project_unit_modulus(const cvec &x);
}

#endif
