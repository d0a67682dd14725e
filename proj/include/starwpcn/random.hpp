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

#ifndef STARWPCN_RANDOM_HPP
#define STARWPCN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "starwpcn/types.hpp"

namespace starwpcn
{
    // Portable random stream. std::mt19937_64 output is fixed by the standard,
    // but the std:: distributions are not, so uniform and Gaussian variates are
    // derived from the raw bits here.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        // Uniform on [0, 1).
        double uniform()
        {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(2.0 * pi * u2);
            has_spare_ = true;
            return r * std::cos(2.0 * pi * u2);
        }

        // Circularly symmetric complex Gaussian with unit variance.
        cdouble complex_normal()
        {
            const double re = normal();
            const double im = normal();
            return {re * M_SQRT1_2, im * M_SQRT1_2};
        }

        std::uint64_t next_seed() { return engine_(); }

    private:
        std::mt19937_64 engine_;
        bool has_spare_ = false;
        double spare_ = 0.0;
    };

    // SplitMix64 finalizer; used to derive independent sub-stream seeds.
    inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
    {
        std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
}

#endif
