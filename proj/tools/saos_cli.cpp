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

// Command-line front end: preset studies, generic sweeps and config validation.

#include "saos/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_config = 1;
    constexpr int exit_runtime = 2;

    struct CommonOptions
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> positions;
        std::optional<int> threads;
        std::string out_dir = "results";
        std::string format = "csv";
    };

    void add_common(CLI::App *cmd, CommonOptions &opts)
    {
        cmd->add_option("--config", opts.config_path, "JSON config overriding the preset");
        cmd->add_option("--seed", opts.seed, "Master seed");
        cmd->add_option("--trials", opts.trials, "Fading trials per point (per position for regions)");
        cmd->add_option("--positions", opts.positions, "MS positions drawn from the region");
        cmd->add_option("--threads", opts.threads, "Worker threads, 0 = all cores; results do not depend on it");
        cmd->add_option("--out", opts.out_dir, "Output directory");
        cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    }

    std::string read_file(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw saos::ConfigError({"cannot read config file '" + path + "'"});
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    std::vector<double> parse_values(const std::string &list)
    {
        std::vector<double> out;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(item, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
                throw saos::ConfigError({"--values: '" + item + "' is not a number"});
            out.push_back(v);
        }
        return out;
    }

    saos::ExperimentConfig resolve(const saos::ExperimentConfig &preset, const CommonOptions &opts)
    {
        saos::ExperimentConfig cfg = preset;
        if (!opts.config_path.empty())
        {
            saos::ValidationResult v = saos::validate_config(read_file(opts.config_path), preset);
            if (!v.ok())
                throw saos::ConfigError(v.errors);
            cfg = *v.config;
        }
        if (opts.seed)
            cfg.master_seed = *opts.seed;
        if (opts.trials)
            cfg.n_trials = *opts.trials;
        if (opts.positions)
            cfg.n_positions = *opts.positions;
        if (opts.threads)
            cfg.threads = *opts.threads;
        if (auto issues = saos::check_config(cfg); !issues.empty())
            throw saos::ConfigError(std::move(issues));
        return cfg;
    }

    void emit(const std::vector<saos::ExperimentResult> &results, const CommonOptions &opts)
    {
        const auto format = opts.format == "json" ? saos::OutputFormat::json : saos::OutputFormat::csv;
        for (const auto &r : results)
            for (const auto &p : saos::write_result(r, opts.out_dir, format))
                std::cout << p.string() << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Sparse RIS tile array simulator"};
    app.set_version_flag("--version", std::string(saos::version));
    app.require_subcommand(1);

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "Check a config file and print the resolved document");
    validate->add_option("config", validate_path, "JSON config")->required();

    CommonOptions fig_opts;
    auto *fig2 = app.add_subcommand("fig2", "Ergodic SE vs transmit SNR, optimal and random phases");
    auto *fig3 = app.add_subcommand("fig3", "Received SNR vs total element count for two Rician factors");
    auto *fig4 = app.add_subcommand("fig4", "Position-averaged SE vs horizontal tile spacing");
    for (auto *cmd : {fig2, fig3, fig4})
        add_common(cmd, fig_opts);

    CommonOptions sweep_opts;
    std::string sweep_var;
    std::string sweep_values;
    auto *sweep = app.add_subcommand("sweep", "Sweep one parameter over a list of values");
    add_common(sweep, sweep_opts);
    sweep->add_option("--var", sweep_var, "Parameter name")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (validate->parsed())
        {
            const saos::ValidationResult v = saos::validate_config(read_file(validate_path));
            if (!v.ok())
            {
                for (const auto &e : v.errors)
                    std::cerr << "error: " << e << '\n';
                return exit_config;
            }
            std::cout << saos::config_to_json(*v.config) << '\n';
            return exit_ok;
        }
        if (fig2->parsed())
            emit(saos::run_fig2(resolve(saos::fig2_preset(), fig_opts)), fig_opts);
        else if (fig3->parsed())
            emit(saos::run_fig3(resolve(saos::fig3_preset(), fig_opts)), fig_opts);
        else if (fig4->parsed())
            emit(saos::run_fig4(resolve(saos::fig4_preset(), fig_opts)), fig_opts);
        else if (sweep->parsed())
        {
            const saos::SweepSpec spec{sweep_var, parse_values(sweep_values)};
            saos::ExperimentConfig cfg = saos::default_config();
            cfg.sweep = spec;
            cfg = resolve(cfg, sweep_opts);
            cfg.sweep = spec;
            if (auto issues = saos::check_config(cfg); !issues.empty())
                throw saos::ConfigError(std::move(issues));
            emit(saos::run_sweep(cfg), sweep_opts);
        }
    }
    catch (const saos::ConfigError &e)
    {
        for (const auto &issue : e.issues())
            std::cerr << "error: " << issue << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}
