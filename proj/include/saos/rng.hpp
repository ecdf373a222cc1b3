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

#ifndef SAOS_RNG_HPP
#define SAOS_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace saos
{
    using Rng = std::mt19937_64;

    // Counter-based seed derivation: every (master, key...) tuple maps to an independent stream seed,
    // so the draws of one trial/tile never depend on how many other trials ran before it.
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

    inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
    {
        return Rng(derive_seed(master, keys));
    }

    // CN(0,1): independent N(0, 1/2) real and imaginary parts
    std::complex<double> standard_complex_gaussian(Rng &rng);

    // Uniform on (-pi, pi]
    double uniform_phase(Rng &rng);

    // Stream domains, used as the first key of derive_seed
    namespace stream
    {
        inline constexpr std::uint64_t channel_bs = 0x42'53;
        inline constexpr std::uint64_t channel_ms = 0x4D'53;
        inline constexpr std::uint64_t trial = 0x54'52;
        inline constexpr std::uint64_t position = 0x50'4F;
        inline constexpr std::uint64_t random_phases = 0x52'50;
    }
}

#endif
