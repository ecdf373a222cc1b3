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

#include "saos/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace saos
{
    namespace
    {
        constexpr double four_pi = 4.0 * std::numbers::pi;

        double free_space_amplitude(double d)
        {
            return 1.0 / std::sqrt(four_pi * d * d);
        }

        SpatialFrequencies draw_frequencies(Rng &rng, NlosAngleModel model, const PlanarArraySpec &array,
                                            double wavelength)
        {
            if (model == NlosAngleModel::virtual_uniform)
            {
                const double theta = uniform_phase(rng);
                const double phi = uniform_phase(rng);
                return {theta, phi};
            }
            // Only the in-plane projections enter the response, so the half-space reduces to the full sphere.
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            const double normal_free = u(rng);
            const double az = std::numbers::pi * u(rng);
            const double rho = std::sqrt(std::max(0.0, 1.0 - normal_free * normal_free));
            const Eigen::Vector3d normal = array.vertical_axis.cross(array.horizontal_axis);
            const Direction3 d = normal_free * normal + rho * std::cos(az) * array.vertical_axis +
                                 rho * std::sin(az) * array.horizontal_axis;
            return spatial_frequencies(d, array, wavelength);
        }
    }

    double db_to_linear(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    double linear_to_db(double linear)
    {
        return 10.0 * std::log10(linear);
    }

    void SystemConfig::validate() const
    {
        if (!(carrier_frequency > 0.0) || !std::isfinite(carrier_frequency))
            throw std::invalid_argument("carrier_frequency must be > 0");
        if (!(rician_bs >= 0.0) || !(rician_ms >= 0.0))
            throw std::invalid_argument("Rician factors must be >= 0");
        if (nlos_paths_bs < 1 || nlos_paths_ms < 1)
            throw std::invalid_argument("NLoS path counts must be >= 1");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("noise_power must be > 0");
        if (!(vr_half_angle > 0.0) || vr_half_angle > std::numbers::pi)
            throw std::invalid_argument("vr_half_angle must lie in (0, pi]");
        if (nlos_attenuation.kind == NlosAttenuationKind::fixed &&
            (!(nlos_attenuation.fixed_bs >= 0.0) || !(nlos_attenuation.fixed_ms >= 0.0)))
            throw std::invalid_argument("fixed NLoS attenuations must be >= 0");
    }

    RicianWeights rician_weights(double k, bool los_only)
    {
        if (los_only)
            return {1.0, 0.0};
        return {std::sqrt(k / (k + 1.0)), std::sqrt(1.0 / (k + 1.0))};
    }

    LinkGeometry link_geometry(const SystemConfig &config, const SaosLayout &layout,
                               const PlanarArraySpec &bs_array, const Position3 &bs_pos, const Position3 &ms_pos)
    {
        config.validate();
        layout.validate();
        bs_array.validate();
        if (!bs_pos.is_finite() || !ms_pos.is_finite())
            throw std::invalid_argument("BS and MS positions must be finite");

        LinkGeometry g;
        g.bs_array = bs_array;
        g.tile_spec = layout.tile_spec;
        g.wavelength = config.wavelength();
        g.tiles.reserve(static_cast<std::size_t>(layout.tile_count()));

        for (int m = 0; m < layout.tile_count(); ++m)
        {
            TileLink t;
            t.center = layout.tile_center(m);
            t.bs_distance = distance(bs_pos, t.center);
            if (!(t.bs_distance > 0.0))
                throw GeometryError("BS coincides with tile " + std::to_string(m));
            const Direction3 to_bs = (bs_pos - t.center) / t.bs_distance;
            t.bs_arrival = spatial_frequencies(to_bs, bs_array, g.wavelength);
            t.tile_departure = spatial_frequencies(to_bs, layout.tile_spec, g.wavelength);
            t.beta = free_space_amplitude(t.bs_distance);

            t.ms_distance = distance(ms_pos, t.center);
            if (!(t.ms_distance > 0.0))
                throw GeometryError("MS coincides with tile " + std::to_string(m));
            t.ms_visible = in_visible_region(tile_visible_region(layout, m, config.vr_half_angle), ms_pos);

            const auto elements = element_positions(layout, m);
            t.element_distance.reserve(elements.size());
            t.alpha.reserve(elements.size());
            for (const Position3 &e : elements)
            {
                const double r = distance(ms_pos, e);
                if (!(r > 0.0))
                    throw GeometryError("MS coincides with an element of tile " + std::to_string(m));
                t.element_distance.push_back(r);
                t.alpha.push_back(t.ms_visible ? free_space_amplitude(r) : 0.0);
            }

            const auto &policy = config.nlos_attenuation;
            if (policy.kind == NlosAttenuationKind::matched_los)
            {
                t.beta_nlos = t.beta;
                t.alpha_nlos = free_space_amplitude(t.ms_distance);
            }
            else
            {
                t.beta_nlos = policy.fixed_bs;
                t.alpha_nlos = policy.fixed_ms;
            }
            if (policy.gate_ms_by_vr && !t.ms_visible)
                t.alpha_nlos = 0.0;

            g.tiles.push_back(std::move(t));
        }
        return g;
    }

    Eigen::VectorXcd steering_ula(double x, int n)
    {
        if (n < 1)
            throw std::invalid_argument("steering vector length must be >= 1");
        Eigen::VectorXcd a(n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int k = 0; k < n; ++k)
            a[k] = std::polar(scale, k * x);
        return a;
    }

    Eigen::VectorXcd steering_upa(double theta, double phi, int n_v, int n_h)
    {
        const Eigen::VectorXcd av = steering_ula(theta, n_v);
        const Eigen::VectorXcd ah = steering_ula(phi, n_h);
        Eigen::VectorXcd a(n_v * n_h);
        for (int kv = 0; kv < n_v; ++kv)
            a.segment(kv * n_h, n_h) = av[kv] * ah;
        return a;
    }

    std::vector<NlosPathDraw> draw_bs_nlos_paths(Rng &rng, const SystemConfig &config, const LinkGeometry &geometry,
                                                 int tile)
    {
        const TileLink &t = geometry.tiles.at(static_cast<std::size_t>(tile));
        std::vector<NlosPathDraw> paths(static_cast<std::size_t>(config.nlos_paths_bs));
        for (auto &p : paths)
        {
            p.gain = standard_complex_gaussian(rng);
            p.bs_side = draw_frequencies(rng, config.nlos_angles, geometry.bs_array, geometry.wavelength);
            p.tile_side = draw_frequencies(rng, config.nlos_angles, geometry.tile_spec, geometry.wavelength);
            p.attenuation = t.beta_nlos;
        }
        return paths;
    }

    std::vector<NlosPathDraw> draw_ms_nlos_paths(Rng &rng, const SystemConfig &config, const LinkGeometry &geometry,
                                                 int tile)
    {
        const TileLink &t = geometry.tiles.at(static_cast<std::size_t>(tile));
        std::vector<NlosPathDraw> paths(static_cast<std::size_t>(config.nlos_paths_ms));
        for (auto &p : paths)
        {
            p.gain = standard_complex_gaussian(rng);
            p.tile_side = draw_frequencies(rng, config.nlos_angles, geometry.tile_spec, geometry.wavelength);
            p.attenuation = t.alpha_nlos;
        }
        return paths;
    }

    Eigen::MatrixXcd bs_tile_los(const LinkGeometry &geometry, int tile)
    {
        const TileLink &t = geometry.tiles.at(static_cast<std::size_t>(tile));
        const auto &b = geometry.bs_array;
        const auto &l = geometry.tile_spec;
        const Eigen::VectorXcd ar = steering_upa(t.bs_arrival.vertical, t.bs_arrival.horizontal, b.n_v, b.n_h);
        const Eigen::VectorXcd at = steering_upa(t.tile_departure.vertical, t.tile_departure.horizontal, l.n_v, l.n_h);
        const double scale = t.beta * std::sqrt(static_cast<double>(b.size()) * l.size());
        return scale * ar * at.adjoint();
    }

    Eigen::MatrixXcd bs_tile_nlos(const std::vector<NlosPathDraw> &paths, const LinkGeometry &geometry)
    {
        const auto &b = geometry.bs_array;
        const auto &l = geometry.tile_spec;
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(b.size(), l.size());
        if (paths.empty())
            return h;
        for (const auto &p : paths)
        {
            const Eigen::VectorXcd ar = steering_upa(p.bs_side.vertical, p.bs_side.horizontal, b.n_v, b.n_h);
            const Eigen::VectorXcd at = steering_upa(p.tile_side.vertical, p.tile_side.horizontal, l.n_v, l.n_h);
            h.noalias() += (p.gain * p.attenuation) * ar * at.adjoint();
        }
        return std::sqrt(static_cast<double>(b.size()) * l.size() / static_cast<double>(paths.size())) * h;
    }

    Eigen::VectorXcd ms_tile_los(const LinkGeometry &geometry, int tile)
    {
        const TileLink &t = geometry.tiles.at(static_cast<std::size_t>(tile));
        const double k = 2.0 * std::numbers::pi / geometry.wavelength;
        Eigen::VectorXcd h(geometry.n_tile_elements());
        for (int c = 0; c < h.size(); ++c)
            h[c] = std::polar(t.alpha[static_cast<std::size_t>(c)], k * t.element_distance[static_cast<std::size_t>(c)]);
        return h;
    }

    Eigen::VectorXcd ms_tile_nlos(const std::vector<NlosPathDraw> &paths, const LinkGeometry &geometry)
    {
        const auto &l = geometry.tile_spec;
        Eigen::VectorXcd h = Eigen::VectorXcd::Zero(l.size());
        if (paths.empty())
            return h;
        for (const auto &p : paths)
            h += (p.gain * p.attenuation) * steering_upa(p.tile_side.vertical, p.tile_side.horizontal, l.n_v, l.n_h);
        return std::sqrt(static_cast<double>(l.size()) / static_cast<double>(paths.size())) * h;
    }

    ChannelSynthesizer::ChannelSynthesizer(const SystemConfig &config, LinkGeometry geometry)
        : config_(config), geometry_(std::move(geometry))
    {
        config_.validate();
        for (int m = 0; m < geometry_.tile_count(); ++m)
        {
            bs_los_.push_back(bs_tile_los(geometry_, m));
            ms_los_.push_back(ms_tile_los(geometry_, m));
        }
    }

    ChannelRealization ChannelSynthesizer::realize(std::uint64_t seed) const
    {
        const RicianWeights wb = rician_weights(config_.rician_bs, config_.los_only);
        const RicianWeights wm = rician_weights(config_.rician_ms, config_.los_only);
        const int nb = geometry_.n_bs();
        const int nl = geometry_.n_tile_elements();

        ChannelRealization out;
        out.seed = seed;
        out.bs_channels.reserve(static_cast<std::size_t>(geometry_.tile_count()));
        out.ms_channels.reserve(static_cast<std::size_t>(geometry_.tile_count()));
        for (int m = 0; m < geometry_.tile_count(); ++m)
        {
            const auto um = static_cast<std::uint64_t>(m);
            TileChannelBS hb;
            hb.beta = geometry_.tiles[static_cast<std::size_t>(m)].beta;
            hb.los_part = bs_los_[static_cast<std::size_t>(m)];
            TileChannelMS hm;
            hm.alpha = geometry_.tiles[static_cast<std::size_t>(m)].alpha;
            hm.los_part = ms_los_[static_cast<std::size_t>(m)];

            if (config_.los_only)
            {
                hb.nlos_part = Eigen::MatrixXcd::Zero(nb, nl);
                hm.nlos_part = Eigen::VectorXcd::Zero(nl);
            }
            else
            {
                Rng rb = make_stream(seed, {stream::channel_bs, um});
                hb.nlos_part = bs_tile_nlos(draw_bs_nlos_paths(rb, config_, geometry_, m), geometry_);
                Rng rm = make_stream(seed, {stream::channel_ms, um});
                hm.nlos_part = ms_tile_nlos(draw_ms_nlos_paths(rm, config_, geometry_, m), geometry_);
            }
            hb.matrix = wb.los * hb.los_part + wb.nlos * hb.nlos_part;
            hm.vector = wm.los * hm.los_part + wm.nlos * hm.nlos_part;
            out.bs_channels.push_back(std::move(hb));
            out.ms_channels.push_back(std::move(hm));
        }
        return out;
    }

    ChannelRealization realize_channels(const SystemConfig &config, const SaosLayout &layout,
                                        const PlanarArraySpec &bs_array, const Position3 &bs_pos,
                                        const Position3 &ms_pos, std::uint64_t seed)
    {
        return ChannelSynthesizer(config, link_geometry(config, layout, bs_array, bs_pos, ms_pos)).realize(seed);
    }
}
