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

#include "starwpcn/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace starwpcn::sdp
{
    namespace
    {
        TraceTerm sparse_term(int var)
        {
            TraceTerm t;
            t.var = var;
            t.dense = false;
            return t;
        }

        double trace_value(const TraceTerm &t, const cmat &x)
        {
            if (t.dense)
                return (t.coeff.cwiseProduct(x.transpose())).sum().real();
            double s = 0.0;
            for (const auto &e : t.entries)
                s += (e.value * x(e.col, e.row)).real();
            return s;
        }

        double term_norm(const TraceTerm &t)
        {
            if (t.dense)
                return t.coeff.norm();
            double s = 0.0;
            for (const auto &e : t.entries)
                s += std::norm(e.value);
            return std::sqrt(s);
        }

        const char *relation_symbol(Relation r)
        {
            switch (r)
            {
            case Relation::less_equal:
                return "<=";
            case Relation::equal:
                return "==";
            case Relation::greater_equal:
                return ">=";
            }
            return "?";
        }
    }

    LinearExpr &LinearExpr::add_trace(MatrixVar x, const cmat &coeff)
    {
        if (coeff.rows() != coeff.cols())
            throw StructureError("trace coefficient must be square");
        TraceTerm t;
        t.var = x.index;
        t.dense = true;
        t.coeff = 0.5 * (coeff + coeff.adjoint());
        trace_.push_back(std::move(t));
        return *this;
    }

    LinearExpr &LinearExpr::add_diag(MatrixVar x, int i, double weight)
    {
        auto t = sparse_term(x.index);
        t.entries.push_back({i, i, cdouble(weight, 0.0)});
        trace_.push_back(std::move(t));
        return *this;
    }

    LinearExpr &LinearExpr::add_real_part(MatrixVar x, int i, int j, double weight)
    {
        if (i == j)
            return add_diag(x, i, weight);
        auto t = sparse_term(x.index);
        t.entries.push_back({i, j, cdouble(0.5 * weight, 0.0)});
        t.entries.push_back({j, i, cdouble(0.5 * weight, 0.0)});
        trace_.push_back(std::move(t));
        return *this;
    }

    LinearExpr &LinearExpr::add_imag_part(MatrixVar x, int i, int j, double weight)
    {
        if (i == j)
            throw StructureError("imaginary part of a diagonal entry is identically zero");
        // Re Tr(E X) with E(i,j) = i w/2, E(j,i) = -i w/2 equals w Im X(i,j).
        auto t = sparse_term(x.index);
        t.entries.push_back({i, j, cdouble(0.0, 0.5 * weight)});
        t.entries.push_back({j, i, cdouble(0.0, -0.5 * weight)});
        trace_.push_back(std::move(t));
        return *this;
    }

    LinearExpr &LinearExpr::add_scalar(ScalarVar s, double coeff)
    {
        scalar_.push_back({s.index, coeff});
        return *this;
    }

    LinearExpr &LinearExpr::add_constant(double c)
    {
        constant_ += c;
        return *this;
    }

    MatrixVar ConicProgram::add_psd(std::string name, int dim)
    {
        if (dim < 1)
            throw StructureError("PSD variable '" + name + "' needs dimension >= 1");
        psd_dims_.push_back(dim);
        psd_names_.push_back(std::move(name));
        return MatrixVar{static_cast<int>(psd_dims_.size()) - 1};
    }

    ScalarVar ConicProgram::add_scalar(std::string name, bool nonnegative)
    {
        scalar_names_.push_back(std::move(name));
        scalar_nonneg_.push_back(nonnegative);
        return ScalarVar{static_cast<int>(scalar_names_.size()) - 1};
    }

    void ConicProgram::set_objective(LinearExpr objective, Sense sense)
    {
        objective_ = std::move(objective);
        sense_ = sense;
    }

    int ConicProgram::add_constraint(LinearExpr lhs, Relation relation, double rhs, std::string label)
    {
        if (!std::isfinite(rhs))
            throw StructureError("constraint '" + label + "' has a non-finite bound");
        constraints_.push_back({std::move(lhs), relation, rhs, std::move(label)});
        return static_cast<int>(constraints_.size()) - 1;
    }

    void ConicProgram::check_expr(const LinearExpr &e, const std::string &where) const
    {
        for (const auto &t : e.trace_terms())
        {
            if (t.var < 0 || t.var >= num_psd())
                throw StructureError(where + ": undeclared matrix variable");
            const int n = psd_dims_[t.var];
            if (t.dense)
            {
                if (t.coeff.rows() != n)
                    throw StructureError(where + ": coefficient of '" + psd_names_[t.var] + "' has dimension " +
                                         std::to_string(t.coeff.rows()) + ", expected " + std::to_string(n));
                if (!t.coeff.allFinite())
                    throw StructureError(where + ": non-finite coefficient");
            }
            for (const auto &en : t.entries)
                if (en.row < 0 || en.row >= n || en.col < 0 || en.col >= n)
                    throw StructureError(where + ": entry index out of range for '" + psd_names_[t.var] + "'");
        }
        for (const auto &s : e.scalar_terms())
        {
            if (s.var < 0 || s.var >= num_scalars())
                throw StructureError(where + ": undeclared scalar variable");
            if (!std::isfinite(s.coeff))
                throw StructureError(where + ": non-finite scalar coefficient");
        }
    }

    void ConicProgram::check() const
    {
        check_expr(objective_, "objective");
        for (const auto &c : constraints_)
            check_expr(c.lhs, c.label.empty() ? std::string("constraint") : c.label);
    }

    void ConicProgram::dump(std::ostream &os) const
    {
        auto write_expr = [&](const LinearExpr &e)
        {
            for (const auto &t : e.trace_terms())
            {
                if (t.dense)
                {
                    os << "  trace " << psd_names_.at(t.var) << " dense\n";
                    for (int i = 0; i < t.coeff.rows(); ++i)
                    {
                        os << "   ";
                        for (int j = 0; j < t.coeff.cols(); ++j)
                            os << ' ' << t.coeff(i, j).real() << (t.coeff(i, j).imag() < 0 ? "" : "+")
                               << t.coeff(i, j).imag() << 'j';
                        os << '\n';
                    }
                }
                else
                {
                    for (const auto &en : t.entries)
                        os << "  entry " << psd_names_.at(t.var) << ' ' << en.row << ' ' << en.col << ' '
                           << en.value.real() << (en.value.imag() < 0 ? "" : "+") << en.value.imag() << "j\n";
                }
            }
            for (const auto &s : e.scalar_terms())
                os << "  scalar " << scalar_names_.at(s.var) << ' ' << s.coeff << '\n';
            if (e.constant() != 0.0)
                os << "  constant " << e.constant() << '\n';
        };

        os << std::setprecision(17);
        os << "conic_program\n";
        for (int i = 0; i < num_psd(); ++i)
            os << "psd " << psd_names_[i] << ' ' << psd_dims_[i] << '\n';
        for (int i = 0; i < num_scalars(); ++i)
            os << "scalar " << scalar_names_[i] << (scalar_nonneg_[i] ? " nonneg" : " free") << '\n';
        os << "objective " << (sense_ == Sense::maximize ? "maximize" : "minimize") << '\n';
        write_expr(objective_);
        for (std::size_t i = 0; i < constraints_.size(); ++i)
        {
            const auto &c = constraints_[i];
            os << "constraint " << i << ' ' << (c.label.empty() ? "-" : c.label) << ' '
               << relation_symbol(c.relation) << ' ' << c.rhs << '\n';
            write_expr(c.lhs);
        }
        os << "end\n";
    }

    const char *to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::unbounded:
            return "unbounded";
        case SolveStatus::numerical_failure:
            return "numerical_failure";
        }
        return "unknown";
    }

    double SolveReport::evaluate(const LinearExpr &e) const
    {
        double v = e.constant();
        for (const auto &t : e.trace_terms())
            v += trace_value(t, matrices.at(t.var));
        for (const auto &s : e.scalar_terms())
            v += s.coeff * scalars.at(s.var);
        return v;
    }

    double max_constraint_violation(const ConicProgram &program, const SolveReport &report)
    {
        double worst = 0.0;
        for (const auto &c : program.constraints())
        {
            const double lhs = report.evaluate(c.lhs);
            double scale = std::max(1.0, std::abs(c.rhs));
            double row = 0.0;
            for (const auto &t : c.lhs.trace_terms())
                row += term_norm(t) * std::max(1.0, report.matrices.at(t.var).norm());
            for (const auto &s : c.lhs.scalar_terms())
                row += std::abs(s.coeff) * std::max(1.0, std::abs(report.scalars.at(s.var)));
            scale = std::max(scale, row);
            double viol = 0.0;
            switch (c.relation)
            {
            case Relation::less_equal:
                viol = std::max(0.0, lhs - c.rhs);
                break;
            case Relation::greater_equal:
                viol = std::max(0.0, c.rhs - lhs);
                break;
            case Relation::equal:
                viol = std::abs(lhs - c.rhs);
                break;
            }
            worst = std::max(worst, viol / scale);
        }
        // Cone membership of the matrix variables.
        for (const auto &x : report.matrices)
        {
            Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            worst = std::max(worst, std::max(0.0, -lo) / std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()));
        }
        for (int i = 0; i < program.num_scalars(); ++i)
            if (program.scalar_nonnegative(i))
                worst = std::max(worst, std::max(0.0, -report.scalars.at(i)) / std::max(1.0, std::abs(report.scalars.at(i))));
        return worst;
    }

    namespace
    {
        cmat embed(const cmat &c)
        {
            const auto n = c.rows();
            cmat out = cmat::Zero(2 * n, 2 * n);
            out.topLeftCorner(n, n) = c.real().cast<cdouble>();
            out.topRightCorner(n, n) = (-c.imag()).cast<cdouble>();
            out.bottomLeftCorner(n, n) = c.imag().cast<cdouble>();
            out.bottomRightCorner(n, n) = c.real().cast<cdouble>();
            return out;
        }

        cmat densify(const TraceTerm &t, int n)
        {
            if (t.dense)
                return t.coeff;
            cmat d = cmat::Zero(n, n);
            for (const auto &e : t.entries)
                d(e.row, e.col) += e.value;
            return d;
        }

        LinearExpr embed_expr(const LinearExpr &e, const ConicProgram &p, const std::vector<MatrixVar> &vars)
        {
            LinearExpr out;
            for (const auto &t : e.trace_terms())
            {
                const int n = p.psd_dims()[t.var];
                // Re Tr(C X) = 1/2 Tr(embed(C) embed(X)) for Hermitian C, X.
                out.add_trace(vars[t.var], 0.5 * embed(densify(t, n)));
            }
            for (const auto &s : e.scalar_terms())
                out.add_scalar(ScalarVar{s.var}, s.coeff);
            out.add_constant(e.constant());
            return out;
        }
    }

    ConicProgram to_real_embedding(const ConicProgram &program)
    {
        ConicProgram out;
        std::vector<MatrixVar> vars;
        for (int i = 0; i < program.num_psd(); ++i)
            vars.push_back(out.add_psd(program.psd_name(i) + "_re", 2 * program.psd_dims()[i]));
        for (int i = 0; i < program.num_scalars(); ++i)
            out.add_scalar(program.scalar_name(i), program.scalar_nonnegative(i));
        out.set_objective(embed_expr(program.objective(), program, vars), program.sense());
        for (const auto &c : program.constraints())
            out.add_constraint(embed_expr(c.lhs, program, vars), c.relation, c.rhs, c.label);
        return out;
    }

    cmat from_real_embedding(const cmat &embedded)
    {
        const auto n = embedded.rows() / 2;
        if (embedded.rows() != 2 * n || embedded.cols() != embedded.rows())
            throw StructureError("embedded matrix must be square with even dimension");
        const rmat a = embedded.real();
        const rmat re = 0.5 * (a.topLeftCorner(n, n) + a.bottomRightCorner(n, n));
        const rmat im = 0.5 * (a.bottomLeftCorner(n, n) - a.topRightCorner(n, n));
        cmat x(n, n);
        x.real() = re;
        x.imag() = im;
        return x;
    }
}
