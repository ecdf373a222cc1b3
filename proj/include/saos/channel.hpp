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

#ifndef SAOS_CHANNEL_HPP
#define SAOS_CHANNEL_HPP

#include "saos/geometry.hpp"
#include "saos/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace saos
{
    inline constexpr double speed_of_light = 299792458.0; // [m/s]

    double db_to_linear(double db);
    double linear_to_db(double linear);

    // How the NLoS amplitude attenuations beta_{m,N} / alpha_{m,N} are chosen
    enum class NlosAttenuationKind
    {
        matched_los, // beta_{m,N} = beta_m, alpha_{m,N} = 1/sqrt(4 pi rho_m^2) with rho_m the MS-tile-center distance
        fixed        // explicit amplitudes from the config
    };

    struct NlosAttenuationPolicy
    {
        NlosAttenuationKind kind = NlosAttenuationKind::matched_los;
        double fixed_bs = 0.0;     // beta_{m,N} when kind == fixed
        double fixed_ms = 0.0;     // alpha_{m,N} when kind == fixed (before VR gating)
        bool gate_ms_by_vr = true; // zero the MS-side NLoS outside the tile's visible region
    };

    // Distribution of NLoS spatial frequencies
    enum class NlosAngleModel
    {
        virtual_uniform, // Theta, Phi i.i.d. uniform over one period; E{a a^H} = I/N
        hemisphere       // physical directions uniform over the half-space in front of each array
    };

    struct SystemConfig
    {
        double carrier_frequency = 28e9; // [Hz]
        double rician_bs = 20.0;         // K_B, linear
        double rician_ms = 20.0;         // K_M, linear
        bool los_only = false;           // Exact K_B = K_M = infinity
        int nlos_paths_bs = 3;           // L_B
        int nlos_paths_ms = 3;           // L_{m,N}, identical for all tiles
        double noise_power = 1e-4;       // sigma^2, linear
        double vr_half_angle = 0.25 * std::numbers::pi;
        NlosAttenuationPolicy nlos_attenuation;
        NlosAngleModel nlos_angles = NlosAngleModel::virtual_uniform;

        double wavelength() const { return speed_of_light / carrier_frequency; }
        void validate() const; // Throws std::invalid_argument
    };

    // sqrt(K/(K+1)) and sqrt(1/(K+1)); (1, 0) for the LoS-only flag
    struct RicianWeights
    {
        double los = 1.0;
        double nlos = 0.0;
    };
    RicianWeights rician_weights(double k, bool los_only);

    // Deterministic per-tile quantities shared by channel synthesis, phase design and the closed form
    struct TileLink
    {
        Position3 center;
        SpatialFrequencies bs_arrival;     // Theta_{m,r}, Phi_{m,r} at the BS array
        SpatialFrequencies tile_departure; // Theta_{m,t}, Phi_{m,t} at the tile
        double bs_distance = 0.0;          // R_m
        double beta = 0.0;                 // beta_m = 1/sqrt(4 pi R_m^2)
        double beta_nlos = 0.0;            // beta_{m,N}
        double ms_distance = 0.0;          // rho_m, MS to tile center
        bool ms_visible = false;           // MS inside the tile's visible region
        std::vector<double> element_distance; // r_{m,c}
        std::vector<double> alpha;            // alpha_{m,c}, zero outside the VR
        double alpha_nlos = 0.0;              // alpha_{m,N}
    };

    // Both BS-side spatial frequencies derive from the tile->BS unit vector, so that the LoS matrix is the
    // far-field form of exp(j 2 pi d / lambda) with the same sign convention as the MS-side element phases.
    struct LinkGeometry
    {
        PlanarArraySpec bs_array;
        PlanarArraySpec tile_spec;
        double wavelength = 0.0;
        std::vector<TileLink> tiles;

        int n_bs() const { return bs_array.size(); }
        int n_tile_elements() const { return tile_spec.size(); }
        int tile_count() const { return static_cast<int>(tiles.size()); }
    };

    LinkGeometry link_geometry(const SystemConfig &config, const SaosLayout &layout,
                               const PlanarArraySpec &bs_array, const Position3 &bs_pos, const Position3 &ms_pos);

    // ULA response exp(j k X)/sqrt(n), k = 0..n-1
    Eigen::VectorXcd steering_ula(double x, int n);

    // a_v(Theta) (x) a_h(Phi)
    Eigen::VectorXcd steering_upa(double theta, double phi, int n_v, int n_h);

    struct NlosPathDraw
    {
        std::complex<double> gain;     // g ~ CN(0,1)
        SpatialFrequencies tile_side;  // at the RIS tile
        SpatialFrequencies bs_side;    // at the BS array (BS-side paths only)
        double attenuation = 0.0;      // beta_{m,l,N} or alpha_{m,l,N}
    };

    std::vector<NlosPathDraw> draw_bs_nlos_paths(Rng &rng, const SystemConfig &config, const LinkGeometry &geometry,
                                                 int tile);
    std::vector<NlosPathDraw> draw_ms_nlos_paths(Rng &rng, const SystemConfig &config, const LinkGeometry &geometry,
                                                 int tile);

    // beta_m sqrt(N_B N_L) a_r a_t^H
    Eigen::MatrixXcd bs_tile_los(const LinkGeometry &geometry, int tile);

    // sqrt(N_B N_L / L_B) sum_l g beta a_r a_t^H
    Eigen::MatrixXcd bs_tile_nlos(const std::vector<NlosPathDraw> &paths, const LinkGeometry &geometry);

    // alpha_{m,c} exp(j 2 pi r_{m,c} / lambda)
    Eigen::VectorXcd ms_tile_los(const LinkGeometry &geometry, int tile);

    // sqrt(N_L / L_{m,N}) sum_l g alpha a(Xi, Psi)
    Eigen::VectorXcd ms_tile_nlos(const std::vector<NlosPathDraw> &paths, const LinkGeometry &geometry);

    struct TileChannelBS
    {
        Eigen::MatrixXcd matrix;    // N_B x N_L
        Eigen::MatrixXcd los_part;
        Eigen::MatrixXcd nlos_part; // zero under the LoS-only flag
        double beta = 0.0;
    };

    struct TileChannelMS
    {
        Eigen::VectorXcd vector; // N_L
        Eigen::VectorXcd los_part;
        Eigen::VectorXcd nlos_part;
        std::vector<double> alpha;
    };

    struct ChannelRealization
    {
        std::vector<TileChannelBS> bs_channels;
        std::vector<TileChannelMS> ms_channels;
        std::uint64_t seed = 0;

        int tile_count() const { return static_cast<int>(bs_channels.size()); }
    };

    // Holds the deterministic LoS parts so repeated draws only pay for the NLoS synthesis.
    // Tile m of realization `seed` draws from streams derive_seed(seed, {channel_bs|channel_ms, m}).
    class ChannelSynthesizer
    {
    public:
        ChannelSynthesizer(const SystemConfig &config, LinkGeometry geometry);

        ChannelRealization realize(std::uint64_t seed) const;

        const LinkGeometry &geometry() const { return geometry_; }
        const SystemConfig &config() const { return config_; }

    private:
        SystemConfig config_;
        LinkGeometry geometry_;
        std::vector<Eigen::MatrixXcd> bs_los_;
        std::vector<Eigen::VectorXcd> ms_los_;
    };

    ChannelRealization realize_channels(const SystemConfig &config, const SaosLayout &layout,
                                        const PlanarArraySpec &bs_array, const Position3 &bs_pos,
                                        const Position3 &ms_pos, std::uint64_t seed);
}

#endif
