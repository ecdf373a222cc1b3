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

#ifndef SAOS_EXPERIMENTS_HPP
#define SAOS_EXPERIMENTS_HPP

#include "saos/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saos
{
    inline constexpr const char *version = "0.1.0";

    // Aggregated configuration problems, one "path: message" entry per violation
    class ConfigError : public std::runtime_error
    {
    public:
        explicit ConfigError(std::vector<std::string> issues);
        const std::vector<std::string> &issues() const { return issues_; }

    private:
        std::vector<std::string> issues_;
    };

    struct SweepSpec
    {
        std::string variable;
        std::vector<double> values;
    };

    // Names accepted by SweepSpec::variable
    const std::vector<std::string> &sweep_variables();

    struct ExperimentConfig
    {
        std::string name = "sweep";

        SystemConfig system;

        // Array geometry in wavelengths so that carrier sweeps rescale it
        int tiles_v = 3;
        int tiles_h = 8;
        double tile_gap_v = 1.0; // [m], tile center pitch
        double tile_gap_h = 3.0; // [m]
        int elements_v = 3;
        int elements_h = 3;
        double element_spacing_wl = 1.0 / 6.0;
        Position3 saos_center{0.0, 0.0, 5.0};

        int bs_elements_v = 4;
        int bs_elements_h = 4;
        double bs_spacing_wl = 0.5;
        Position3 bs_position{100.0, -100.0, 10.0};

        MsRegion ms_region = MsRegion::point({4.0, 0.0, 0.0});

        std::optional<SweepSpec> sweep;  // inner variable, one row per value
        std::optional<SweepSpec> series; // outer variable, one result per value

        int n_trials = 10000;
        int n_positions = 1;
        std::uint64_t master_seed = 1;
        int threads = 0; // 0 = hardware concurrency; never affects results
        PhaseDesign phase_design = PhaseDesign::optimal;

        Scenario scenario() const;
    };

    // Collects every semantic violation; empty means valid
    std::vector<std::string> check_config(const ExperimentConfig &config);

    // Sets a named variable; throws ConfigError for unknown names or invalid values
    void apply_variable(ExperimentConfig &config, std::string_view variable, double value);

    // Reference setup: 28 GHz, 4x4 BS at (100,-100,10), SAoS centered at (0,0,5) in the yoz plane,
    // 3 x 8 tiles of 3 x 3 elements at lambda/6, 1 m / 3 m tile pitch, 90 degree VR.
    ExperimentConfig default_config();
    ExperimentConfig fig2_preset();
    ExperimentConfig fig3_preset();
    ExperimentConfig fig4_preset();

    struct ValidationResult
    {
        std::optional<ExperimentConfig> config;
        std::vector<std::string> errors;

        bool ok() const { return errors.empty(); }
    };

    // Parses a JSON document whose sections override `base`; unspecified keys keep their base value
    ValidationResult validate_config(std::string_view raw_text, const ExperimentConfig &base = default_config());

    std::string config_to_json(const ExperimentConfig &config);
    std::uint64_t config_hash(const ExperimentConfig &config);

    struct ResultRow
    {
        double sweep_value = 0.0;
        double mc_se = 0.0;     // [bits/s/Hz]
        double mc_stderr = 0.0;
        double approx_se = 0.0; // [bits/s/Hz]
        double rx_snr_db = 0.0; // 10 log10 of the Monte Carlo mean received SNR
        int n_trials = 0;
        int n_positions = 0;
    };

    struct ResultMetadata
    {
        std::string config_json; // resolved config, sufficient to rerun
        std::uint64_t config_hash = 0;
        std::uint64_t seed = 0;
        std::string version = saos::version;
        std::string sweep_variable;
        std::string series_variable;
        double series_value = 0.0;
        double wall_clock_s = 0.0;
    };

    struct ExperimentResult
    {
        std::string name;
        std::vector<ResultRow> rows;
        ResultMetadata metadata;
    };

    // One point: Monte Carlo and closed form at the config's current values
    ResultRow run_point(const ExperimentConfig &config);

    // One result per series value (a single result without series), one row per sweep value
    std::vector<ExperimentResult> run_sweep(const ExperimentConfig &config);

    std::vector<ExperimentResult> run_fig2(const ExperimentConfig &config);
    // sweep_value is rewritten to the total RIS element count
    std::vector<ExperimentResult> run_fig3(const ExperimentConfig &config);
    std::vector<ExperimentResult> run_fig4(const ExperimentConfig &config);

    inline constexpr const char *csv_header =
        "sweep_value,mc_se_bps_hz,mc_stderr,approx_se_bps_hz,rx_snr_db,n_trials,n_positions";

    std::string to_csv(const ExperimentResult &result);
    std::string to_json(const ExperimentResult &result, bool include_rows = true);

    enum class OutputFormat
    {
        csv,
        json
    };

    // csv: <name>.csv plus <name>.meta.json; json: <name>.json. Returns the written paths.
    std::vector<std::filesystem::path> write_result(const ExperimentResult &result,
                                                    const std::filesystem::path &out_dir, OutputFormat format);
}

#endif
