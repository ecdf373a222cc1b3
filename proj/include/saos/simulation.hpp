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

#ifndef SAOS_SIMULATION_HPP
#define SAOS_SIMULATION_HPP

#include "saos/channel.hpp"
#include "saos/closed_form.hpp"
#include "saos/reflection.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace saos
{
    class ZeroChannelError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Unit-norm MRC combiner w = v / ||v||
    struct MrcWeights
    {
        Eigen::VectorXcd w;
    };

    MrcWeights mrc_weights(const Eigen::VectorXcd &effective_channel);

    struct TrialOutcome
    {
        double instantaneous_se = 0.0; // log2(1 + received_snr)
        double received_snr = 0.0;     // |w^H H_BS Gamma h|^2 / sigma^2
        std::uint64_t seed = 0;
        bool zero_channel = false;     // no path reaches the BS; SE reported as 0
    };

    TrialOutcome instantaneous_se(const ChannelRealization &realization, const ReflectionPhases &phases,
                                  double noise_power);

    struct ErgodicEstimate
    {
        double mean_se = 0.0;
        double std_error = 0.0; // sample std / sqrt(n_trials)
        int n_trials = 0;
        double mean_snr = 0.0;
        double snr_std_error = 0.0;
    };

    // Seed of trial t under a master seed; shared by every caller so that estimates reuse the same fading
    std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

    // Expectation over the NLoS fading for fixed geometry. Trials are reduced in index order, so the result
    // does not depend on `threads`.
    ErgodicEstimate ergodic_se(const ChannelSynthesizer &synthesizer, const ReflectionPhases &phases, int n_trials,
                               std::uint64_t master_seed, int threads = 1);

    // Axis-aligned box of MS positions; min == max is a fixed point
    struct MsRegion
    {
        Position3 min;
        Position3 max;

        static MsRegion point(const Position3 &p) { return {p, p}; }
        bool is_point() const { return min == max; }
        Position3 sample(Rng &rng) const;
    };

    enum class PhaseDesign
    {
        optimal,
        random
    };

    // Everything except the MS position
    struct Scenario
    {
        SystemConfig system;
        SaosLayout layout;
        PlanarArraySpec bs_array;
        Position3 bs_position;
    };

    // Phases for one MS position: the optimal design, or a uniform draw from the `random_phases` stream of `seed`
    ReflectionPhases design_phases(const LinkGeometry &geometry, PhaseDesign design, std::uint64_t seed);

    struct PositionAveragedEstimate
    {
        ErgodicEstimate mc;          // mean_se / mean_snr averaged over positions
        double approx_se = 0.0;      // average of log2(1 + S(p)/sigma^2)
        double signal_power = 0.0;   // average of S(p)
        int n_positions = 0;
    };

    // Position p is drawn from stream (seed, position, p); its fading uses master seed
    // derive_seed(seed, {trial, p}). Phases are redesigned for every position.
    PositionAveragedEstimate ergodic_se_over_positions(const Scenario &scenario, const MsRegion &region,
                                                       PhaseDesign design, int n_positions, int n_trials,
                                                       std::uint64_t seed, int threads = 1);
}

#endif
