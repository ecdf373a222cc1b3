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

#include "saos/simulation.hpp"

#include "saos/parallel.hpp"

#include <cmath>
#include <vector>

namespace saos
{
    namespace
    {
        struct MeanAndError
        {
            double mean = 0.0;
            double std_error = 0.0;
        };

        MeanAndError summarize(const std::vector<double> &x)
        {
            MeanAndError out;
            if (x.empty())
                return out;
            double sum = 0.0;
            for (const double v : x)
                sum += v;
            out.mean = sum / static_cast<double>(x.size());
            if (x.size() < 2)
                return out;
            double ss = 0.0;
            for (const double v : x)
                ss += (v - out.mean) * (v - out.mean);
            const double n = static_cast<double>(x.size());
            out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            return out;
        }
    }

    MrcWeights mrc_weights(const Eigen::VectorXcd &effective_channel)
    {
        const double norm = effective_channel.norm();
        if (!(norm > 0.0))
            throw ZeroChannelError("effective channel is zero");
        return {effective_channel / norm};
    }

    TrialOutcome instantaneous_se(const ChannelRealization &realization, const ReflectionPhases &phases,
                                  double noise_power)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("noise power must be > 0");
        TrialOutcome out;
        out.seed = realization.seed;
        const Eigen::VectorXcd v = apply_reflection(realization, phases);
        try
        {
            const MrcWeights mrc = mrc_weights(v);
            // E{|w^H z|^2} = sigma^2 for a unit-norm combiner
            out.received_snr = std::norm(mrc.w.dot(v)) / noise_power;
            out.instantaneous_se = std::log2(1.0 + out.received_snr);
        }
        catch (const ZeroChannelError &)
        {
            out.zero_channel = true;
        }
        return out;
    }

    std::uint64_t trial_seed(std::uint64_t master_seed, int trial)
    {
        return derive_seed(master_seed, {stream::trial, static_cast<std::uint64_t>(trial)});
    }

    ErgodicEstimate ergodic_se(const ChannelSynthesizer &synthesizer, const ReflectionPhases &phases, int n_trials,
                               std::uint64_t master_seed, int threads)
    {
        if (n_trials < 1)
            throw std::invalid_argument("n_trials must be >= 1");
        const double noise = synthesizer.config().noise_power;
        std::vector<double> se(static_cast<std::size_t>(n_trials));
        std::vector<double> snr(static_cast<std::size_t>(n_trials));
        parallel_for(se.size(), threads, [&](std::size_t t) {
            const TrialOutcome o =
                instantaneous_se(synthesizer.realize(trial_seed(master_seed, static_cast<int>(t))), phases, noise);
            se[t] = o.instantaneous_se;
            snr[t] = o.received_snr;
        });
        const MeanAndError s = summarize(se);
        const MeanAndError r = summarize(snr);
        return {s.mean, s.std_error, n_trials, r.mean, r.std_error};
    }

    Position3 MsRegion::sample(Rng &rng) const
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double ux = u(rng);
        const double uy = u(rng);
        const double uz = u(rng);
        return {min.x + ux * (max.x - min.x), min.y + uy * (max.y - min.y), min.z + uz * (max.z - min.z)};
    }

    ReflectionPhases design_phases(const LinkGeometry &geometry, PhaseDesign design, std::uint64_t seed)
    {
        if (design == PhaseDesign::optimal)
            return optimal_phases(geometry);
        Rng rng = make_stream(seed, {stream::random_phases});
        return random_phases(rng, geometry.tile_count(), geometry.n_tile_elements());
    }

    PositionAveragedEstimate ergodic_se_over_positions(const Scenario &scenario, const MsRegion &region,
                                                       PhaseDesign design, int n_positions, int n_trials,
                                                       std::uint64_t seed, int threads)
    {
        if (n_positions < 1)
            throw std::invalid_argument("n_positions must be >= 1");
        if (n_trials < 1)
            throw std::invalid_argument("n_trials must be >= 1");

        const auto np = static_cast<std::size_t>(n_positions);
        std::vector<ErgodicEstimate> per_position(np);
        std::vector<double> approx(np), power(np);
        parallel_for(np, threads, [&](std::size_t p) {
            const auto up = static_cast<std::uint64_t>(p);
            Rng pos_rng = make_stream(seed, {stream::position, up});
            const Position3 ms = region.sample(pos_rng);
            LinkGeometry geometry =
                link_geometry(scenario.system, scenario.layout, scenario.bs_array, scenario.bs_position, ms);
            const ReflectionPhases phases = design_phases(geometry, design, derive_seed(seed, {stream::position, up}));
            const SignalPowerBreakdown s = mean_signal_power(scenario.system, geometry, phases);
            power[p] = s.total;
            approx[p] = approx_se(s.total, scenario.system.noise_power);
            const ChannelSynthesizer synth(scenario.system, std::move(geometry));
            per_position[p] = ergodic_se(synth, phases, n_trials, derive_seed(seed, {stream::trial, up}), 1);
        });

        std::vector<double> se(np), snr(np);
        for (std::size_t p = 0; p < np; ++p)
        {
            se[p] = per_position[p].mean_se;
            snr[p] = per_position[p].mean_snr;
        }
        const MeanAndError s = summarize(se);
        const MeanAndError r = summarize(snr);
        PositionAveragedEstimate out;
        out.n_positions = n_positions;
        out.mc = {s.mean, n_positions > 1 ? s.std_error : per_position[0].std_error, n_trials, r.mean,
                  n_positions > 1 ? r.std_error : per_position[0].snr_std_error};
        out.approx_se = summarize(approx).mean;
        out.signal_power = summarize(power).mean;
        return out;
    }
}
