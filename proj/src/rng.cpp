// SPDX-License-Identifier: Apache-2.0
//
// saos-sim: simulator for sparse arrays of RIS sub-surfaces
// Copyright (C) 2026 saos-sim contributors
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

#include "saos/rng.hpp"

#include <cmath>
#include <numbers>

namespace saos
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
    {
        std::uint64_t h = splitmix64(master);
        for (const std::uint64_t k : keys)
            h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
        return h;
    }

    std::complex<double> standard_complex_gaussian(Rng &rng)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    double uniform_phase(Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return std::numbers::pi - 2.0 * std::numbers::pi * u(rng);
    }
}
