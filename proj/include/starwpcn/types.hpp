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

#ifndef STARWPCN_TYPES_HPP
#define STARWPCN_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace starwpcn
{
    using cdouble = std::complex<double>;
    using cmat = Eigen::MatrixXcd;
    using cvec = Eigen::VectorXcd;
    using rmat = Eigen::MatrixXd;
    using rvec = Eigen::VectorXd;
    using crow = Eigen::RowVectorXcd;

    inline constexpr double pi = 3.14159265358979323846;

    // Thrown when inputs violate a documented precondition (bad geometry,
    // negative distance, inconsistent dimensions).
    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class StructureError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A numerical routine could not produce a usable answer.
    class SolverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
