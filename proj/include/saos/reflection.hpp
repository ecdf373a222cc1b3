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

#ifndef SAOS_REFLECTION_HPP
#define SAOS_REFLECTION_HPP

#include "saos/channel.hpp"

#include <Eigen/Dense>

namespace saos
{
    // Reflection phases varpi_{m,s}; row m = tile, column s = element. Gamma_m = diag(exp(j varpi_{m,:})).
    struct ReflectionPhases
    {
        Eigen::MatrixXd phases;

        int tile_count() const { return static_cast<int>(phases.rows()); }
        int elements_per_tile() const { return static_cast<int>(phases.cols()); }

        // Diagonal of Gamma_m
        Eigen::VectorXcd coefficients(int tile) const;

        static ReflectionPhases zeros(int m_l, int n_l);
    };

    struct ElementRef
    {
        int tile = 0;
        int element = 0;
    };

    // Reduce to (-pi, pi]
    double wrap_phase(double phase);

    // Phase design that zeroes Omega_{n,c,m,s} for every (m, s) against the reference element (n, c).
    // Only the MS position (through r_{m,s}) and the LoS spatial frequencies are needed.
    ReflectionPhases optimal_phases(const LinkGeometry &geometry, ElementRef reference = {},
                                    double reference_phase = 0.0);

    // i.i.d. uniform on (-pi, pi]
    ReflectionPhases random_phases(Rng &rng, int m_l, int n_l);

    // H_BS Gamma h = sum_m H_m Gamma_m h_m
    Eigen::VectorXcd apply_reflection(const ChannelRealization &realization, const ReflectionPhases &phases);
}

#endif
