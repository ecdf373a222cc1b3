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

#ifndef SAOS_CLOSED_FORM_HPP
#define SAOS_CLOSED_FORM_HPP

#include "saos/channel.hpp"
#include "saos/reflection.hpp"

#include <complex>
#include <stdexcept>

namespace saos
{
    // Raised when an identity that must hold analytically is violated numerically
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // f_{n_h}(x) = ceil(x / n_h), 1-based
    int index_row(int x, int n_h);

    // g_{n_h}(x) = x - (ceil(x / n_h) - 1) n_h, 1-based
    int index_col(int x, int n_h);

    // Two-dimensional Dirichlet kernel V_{m,n} of the BS array for arrival frequencies of tiles m and n
    double dirichlet_kernel(double theta_m, double theta_n, double phi_m, double phi_n, int n_bv, int n_bh);

    // Phase of entry (s, c) of H_{m,L}^H H_{n,L} once beta_m beta_n V_{m,n} is divided out.
    // Tile and element indices are 0-based.
    double upsilon(const LinkGeometry &geometry, int m, int n, int c, int s);

    // Omega_{n,c,m,s} = 2 pi (r_{n,c} - r_{m,s}) / lambda + varpi_{n,c} - varpi_{m,s} + Upsilon_{m,n,c,s}
    double omega(const LinkGeometry &geometry, const ReflectionPhases &phases, int n, int c, int m, int s);

    // O_{1,1} for tiles (m, n) = beta_m beta_n V_{m,n} sum_c sum_s alpha_{n,c} alpha_{m,s} exp(j Omega_{n,c,m,s})
    std::complex<double> o11_closed_form(const LinkGeometry &geometry, const ReflectionPhases &phases, int m, int n);

    // Mixing factors: T = 1/((K_M+1)(K_B+1)), T_1 = T K_M K_B; (T, T_1) = (0, 1) under the LoS-only flag
    struct RicianScaling
    {
        double t = 0.0;
        double t1 = 1.0;
        double los_nlosbs = 0.0;  // T K_M
        double nlosms_losbs = 0.0; // T K_B
    };
    RicianScaling rician_scaling(const SystemConfig &config);

    // The four addends of the mean received signal power S = E{||H_BS Gamma h||^2}
    struct SignalPowerBreakdown
    {
        double term_los_los = 0.0;      // T_1 sum_m sum_n O_{1,1}
        double term_los_nlosbs = 0.0;   // T K_M N_B sum_m beta_{m,N}^2 sum_t alpha_{m,t}^2
        double term_nlosms_losbs = 0.0; // T N_B N_L K_B sum_m beta_m^2 alpha_{m,N}^2
        double term_nlos_nlos = 0.0;    // T N_B N_L sum_m beta_{m,N}^2 alpha_{m,N}^2
        double total = 0.0;
        double t_factor = 0.0;
        double t1_factor = 0.0;
    };

    SignalPowerBreakdown mean_signal_power(const SystemConfig &config, const LinkGeometry &geometry,
                                           const ReflectionPhases &phases);

    // log2(1 + S / sigma^2)
    double approx_se(double signal_power, double noise_power);
}

#endif
