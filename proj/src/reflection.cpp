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

#include "saos/reflection.hpp"

#include "saos/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace saos
{
    Eigen::VectorXcd ReflectionPhases::coefficients(int tile) const
    {
        if (tile < 0 || tile >= tile_count())
            throw std::out_of_range("tile index out of range");
        Eigen::VectorXcd g(elements_per_tile());
        for (int s = 0; s < g.size(); ++s)
            g[s] = std::polar(1.0, phases(tile, s));
        return g;
    }

    ReflectionPhases ReflectionPhases::zeros(int m_l, int n_l)
    {
        return {Eigen::MatrixXd::Zero(m_l, n_l)};
    }

    double wrap_phase(double phase)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double w = std::remainder(phase, two_pi); // [-pi, pi]
        if (w <= -std::numbers::pi)
            w += two_pi;
        return w;
    }

    ReflectionPhases optimal_phases(const LinkGeometry &geometry, ElementRef reference, double reference_phase)
    {
        const int m_l = geometry.tile_count();
        const int n_l = geometry.n_tile_elements();
        if (reference.tile < 0 || reference.tile >= m_l || reference.element < 0 || reference.element >= n_l)
            throw std::out_of_range("reference element out of range");

        const double k = 2.0 * std::numbers::pi / geometry.wavelength;
        const int n = reference.tile;
        const int c = reference.element;
        const double r_ref = geometry.tiles[static_cast<std::size_t>(n)].element_distance[static_cast<std::size_t>(c)];

        ReflectionPhases out{Eigen::MatrixXd(m_l, n_l)};
        for (int m = 0; m < m_l; ++m)
        {
            const auto &r = geometry.tiles[static_cast<std::size_t>(m)].element_distance;
            for (int s = 0; s < n_l; ++s)
                out.phases(m, s) = wrap_phase(k * (r_ref - r[static_cast<std::size_t>(s)]) + reference_phase +
                                              upsilon(geometry, m, n, c, s));
        }
        return out;
    }

    ReflectionPhases random_phases(Rng &rng, int m_l, int n_l)
    {
        if (m_l < 0 || n_l < 0)
            throw std::invalid_argument("phase matrix dimensions must be >= 0");
        ReflectionPhases out{Eigen::MatrixXd(m_l, n_l)};
        for (int m = 0; m < m_l; ++m)
            for (int s = 0; s < n_l; ++s)
                out.phases(m, s) = uniform_phase(rng);
        return out;
    }

    Eigen::VectorXcd apply_reflection(const ChannelRealization &realization, const ReflectionPhases &phases)
    {
        const int m_l = realization.tile_count();
        if (m_l == 0 || phases.tile_count() != m_l ||
            static_cast<int>(realization.ms_channels.size()) != m_l)
            throw std::invalid_argument("reflection phases do not match the channel tile count");

        const Eigen::Index n_b = realization.bs_channels.front().matrix.rows();
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_b);
        for (int m = 0; m < m_l; ++m)
        {
            const auto &h_bs = realization.bs_channels[static_cast<std::size_t>(m)].matrix;
            const auto &h_ms = realization.ms_channels[static_cast<std::size_t>(m)].vector;
            if (h_bs.cols() != phases.elements_per_tile() || h_ms.size() != h_bs.cols() || h_bs.rows() != n_b)
                throw std::invalid_argument("channel and phase dimensions are inconsistent");
            y.noalias() += h_bs * phases.coefficients(m).cwiseProduct(h_ms);
        }
        return y;
    }
}
