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

#include "saos/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace saos
{
    namespace
    {
        constexpr double dirichlet_singular_tolerance = 1e-9;
        constexpr double hermitian_residue_tolerance = 1e-9;

        // sin(N d / 2) / sin(d / 2), with the removable singularities at d = 2 pi k
        double dirichlet_factor(double d, int n)
        {
            const double k = std::round(d / (2.0 * std::numbers::pi));
            const double eps = d - 2.0 * std::numbers::pi * k;
            if (std::abs(eps) < dirichlet_singular_tolerance)
            {
                const bool odd_flip = (static_cast<long long>(k) * (n - 1)) % 2 != 0;
                return odd_flip ? -static_cast<double>(n) : static_cast<double>(n);
            }
            return std::sin(0.5 * n * d) / std::sin(0.5 * d);
        }

        void check_tile(const LinkGeometry &g, int m)
        {
            if (m < 0 || m >= g.tile_count())
                throw std::out_of_range("tile index " + std::to_string(m) + " out of range");
        }

        void check_element(const LinkGeometry &g, int c)
        {
            if (c < 0 || c >= g.n_tile_elements())
                throw std::out_of_range("element index " + std::to_string(c) + " out of range");
        }
    }

    int index_row(int x, int n_h)
    {
        if (x < 1 || n_h < 1)
            throw std::invalid_argument("index_row requires x >= 1 and n_h >= 1");
        return (x + n_h - 1) / n_h;
    }

    int index_col(int x, int n_h)
    {
        return x - (index_row(x, n_h) - 1) * n_h;
    }

    double dirichlet_kernel(double theta_m, double theta_n, double phi_m, double phi_n, int n_bv, int n_bh)
    {
        return dirichlet_factor(theta_n - theta_m, n_bv) * dirichlet_factor(phi_n - phi_m, n_bh);
    }

    double upsilon(const LinkGeometry &geometry, int m, int n, int c, int s)
    {
        check_tile(geometry, m);
        check_tile(geometry, n);
        check_element(geometry, c);
        check_element(geometry, s);
        const int n_lh = geometry.tile_spec.n_h;
        const auto &tm = geometry.tiles[static_cast<std::size_t>(m)];
        const auto &tn = geometry.tiles[static_cast<std::size_t>(n)];
        const int fs = index_row(s + 1, n_lh), gs = index_col(s + 1, n_lh);
        const int fc = index_row(c + 1, n_lh), gc = index_col(c + 1, n_lh);
        return (fs - 1) * tm.tile_departure.vertical + (gs - 1) * tm.tile_departure.horizontal -
               (fc - 1) * tn.tile_departure.vertical - (gc - 1) * tn.tile_departure.horizontal +
               0.5 * (geometry.bs_array.n_v - 1) * (tn.bs_arrival.vertical - tm.bs_arrival.vertical) +
               0.5 * (geometry.bs_array.n_h - 1) * (tn.bs_arrival.horizontal - tm.bs_arrival.horizontal);
    }

    double omega(const LinkGeometry &geometry, const ReflectionPhases &phases, int n, int c, int m, int s)
    {
        const double ups = upsilon(geometry, m, n, c, s);
        const double r_nc = geometry.tiles[static_cast<std::size_t>(n)].element_distance[static_cast<std::size_t>(c)];
        const double r_ms = geometry.tiles[static_cast<std::size_t>(m)].element_distance[static_cast<std::size_t>(s)];
        return 2.0 * std::numbers::pi * (r_nc - r_ms) / geometry.wavelength + phases.phases(n, c) -
               phases.phases(m, s) + ups;
    }

    std::complex<double> o11_closed_form(const LinkGeometry &geometry, const ReflectionPhases &phases, int m, int n)
    {
        check_tile(geometry, m);
        check_tile(geometry, n);
        if (phases.tile_count() != geometry.tile_count() || phases.elements_per_tile() != geometry.n_tile_elements())
            throw std::invalid_argument("reflection phases do not match the layout");
        const auto &tm = geometry.tiles[static_cast<std::size_t>(m)];
        const auto &tn = geometry.tiles[static_cast<std::size_t>(n)];
        if (!tm.ms_visible || !tn.ms_visible)
            return {0.0, 0.0};

        const double v = dirichlet_kernel(tm.bs_arrival.vertical, tn.bs_arrival.vertical, tm.bs_arrival.horizontal,
                                          tn.bs_arrival.horizontal, geometry.bs_array.n_v, geometry.bs_array.n_h);
        std::complex<double> acc{0.0, 0.0};
        const int n_l = geometry.n_tile_elements();
        for (int c = 0; c < n_l; ++c)
            for (int s = 0; s < n_l; ++s)
                acc += std::polar(tn.alpha[static_cast<std::size_t>(c)] * tm.alpha[static_cast<std::size_t>(s)],
                                  omega(geometry, phases, n, c, m, s));
        return tm.beta * tn.beta * v * acc;
    }

    RicianScaling rician_scaling(const SystemConfig &config)
    {
        if (config.los_only)
            return {0.0, 1.0, 0.0, 0.0};
        const double kb = config.rician_bs;
        const double km = config.rician_ms;
        const double t = 1.0 / ((km + 1.0) * (kb + 1.0));
        return {t, t * km * kb, t * km, t * kb};
    }

    SignalPowerBreakdown mean_signal_power(const SystemConfig &config, const LinkGeometry &geometry,
                                           const ReflectionPhases &phases)
    {
        const RicianScaling f = rician_scaling(config);
        const int m_l = geometry.tile_count();
        const double n_b = geometry.n_bs();
        const double n_l = geometry.n_tile_elements();

        SignalPowerBreakdown out;
        out.t_factor = f.t;
        out.t1_factor = f.t1;

        if (f.t1 != 0.0)
        {
            std::complex<double> sum{0.0, 0.0};
            double magnitude = 0.0;
            for (int m = 0; m < m_l; ++m)
                for (int n = 0; n < m_l; ++n)
                {
                    const std::complex<double> o = o11_closed_form(geometry, phases, m, n);
                    sum += o;
                    magnitude += std::abs(o);
                }
            if (std::abs(sum.imag()) > hermitian_residue_tolerance * magnitude)
                throw NumericalError("LoS double sum is not Hermitian: imaginary residue " +
                                     std::to_string(sum.imag()) + " vs magnitude " + std::to_string(magnitude));
            out.term_los_los = f.t1 * sum.real();
        }

        double los_nlosbs = 0.0, nlosms_losbs = 0.0, nlos_nlos = 0.0;
        for (const TileLink &t : geometry.tiles)
        {
            double alpha_sq = 0.0;
            for (const double a : t.alpha)
                alpha_sq += a * a;
            const double bn2 = t.beta_nlos * t.beta_nlos;
            const double an2 = t.alpha_nlos * t.alpha_nlos;
            los_nlosbs += bn2 * alpha_sq;
            nlosms_losbs += t.beta * t.beta * an2;
            nlos_nlos += bn2 * an2;
        }
        out.term_los_nlosbs = f.los_nlosbs * n_b * los_nlosbs;
        out.term_nlosms_losbs = f.nlosms_losbs * n_b * n_l * nlosms_losbs;
        out.term_nlos_nlos = f.t * n_b * n_l * nlos_nlos;
        out.total = out.term_los_los + out.term_los_nlosbs + out.term_nlosms_losbs + out.term_nlos_nlos;
        return out;
    }

    double approx_se(double signal_power, double noise_power)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("noise power must be > 0");
        if (!(signal_power >= 0.0))
            throw std::invalid_argument("signal power must be >= 0");
        return std::log2(1.0 + signal_power / noise_power);
    }
}
