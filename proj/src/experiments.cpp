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

#include "saos/experiments.hpp"

#include "saos/parallel.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace saos
{
    using nlohmann::json;

    namespace
    {
        constexpr double deg = std::numbers::pi / 180.0;

        std::string format_number(double v)
        {
            std::array<char, 64> buf{};
            std::snprintf(buf.data(), buf.size(), "%.12g", v);
            return buf.data();
        }

        std::string join(const std::vector<std::string> &items, std::string_view sep)
        {
            std::string out;
            for (std::size_t i = 0; i < items.size(); ++i)
            {
                if (i)
                    out += sep;
                out += items[i];
            }
            return out;
        }

        std::vector<double> linspace_step(double first, double last, double step)
        {
            std::vector<double> v;
            const int n = static_cast<int>(std::round((last - first) / step));
            for (int i = 0; i <= n; ++i)
                v.push_back(first + i * step);
            return v;
        }

        const char *phase_design_name(PhaseDesign d)
        {
            return d == PhaseDesign::optimal ? "optimal" : "random";
        }

        const char *angle_model_name(NlosAngleModel m)
        {
            return m == NlosAngleModel::virtual_uniform ? "virtual_uniform" : "hemisphere";
        }

        json position_json(const Position3 &p)
        {
            return json::array({p.x, p.y, p.z});
        }

        bool is_integral(double v)
        {
            return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9;
        }

        // Reads optional keys of one JSON section, recording type problems instead of throwing
        class SectionReader
        {
        public:
            SectionReader(const json &doc, std::string path, std::vector<std::string> &errors)
                : errors_(errors), path_(std::move(path))
            {
                if (doc.is_null())
                    return;
                if (!doc.is_object())
                {
                    errors_.push_back(path_ + ": must be an object");
                    return;
                }
                doc_ = &doc;
                for (auto it = doc.begin(); it != doc.end(); ++it)
                    unread_.push_back(it.key());
            }

            ~SectionReader() = default;

            void number(const char *key, double &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_number())
                        out = v->get<double>();
                    else
                        errors_.push_back(child(key) + ": must be a number");
                }
            }

            void integer(const char *key, int &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_number() && is_integral(v->get<double>()))
                        out = static_cast<int>(v->get<double>());
                    else
                        errors_.push_back(child(key) + ": must be an integer");
                }
            }

            void seed(const char *key, std::uint64_t &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_number_unsigned())
                        out = v->get<std::uint64_t>();
                    else
                        errors_.push_back(child(key) + ": must be a non-negative integer");
                }
            }

            void boolean(const char *key, bool &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_boolean())
                        out = v->get<bool>();
                    else
                        errors_.push_back(child(key) + ": must be true or false");
                }
            }

            void string(const char *key, std::string &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_string())
                        out = v->get<std::string>();
                    else
                        errors_.push_back(child(key) + ": must be a string");
                }
            }

            void position(const char *key, Position3 &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_array() && v->size() == 3 && (*v)[0].is_number() && (*v)[1].is_number() &&
                        (*v)[2].is_number())
                        out = {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
                    else
                        errors_.push_back(child(key) + ": must be an array of three numbers");
                }
            }

            const json *section(const char *key)
            {
                return find(key);
            }

            std::string child(const char *key) const
            {
                return path_.empty() ? std::string(key) : path_ + "." + key;
            }

            void report_unknown()
            {
                for (const auto &k : unread_)
                    errors_.push_back(child(k.c_str()) + ": unknown key");
            }

        private:
            const json *find(const char *key)
            {
                if (!doc_ || !doc_->contains(key))
                    return nullptr;
                std::erase(unread_, std::string(key));
                return &(*doc_)[key];
            }

            std::vector<std::string> &errors_;
            std::string path_;
            const json *doc_ = nullptr;
            std::vector<std::string> unread_;
        };

        std::optional<SweepSpec> read_sweep(const json *doc, const std::string &path, std::vector<std::string> &errors)
        {
            if (!doc)
                return std::nullopt;
            SectionReader r(*doc, path, errors);
            SweepSpec s;
            r.string("variable", s.variable);
            if (const json *vals = r.section("values"))
            {
                if (!vals->is_array())
                    errors.push_back(path + ".values: must be an array of numbers");
                else
                    for (const auto &v : *vals)
                    {
                        if (!v.is_number())
                        {
                            errors.push_back(path + ".values: must be an array of numbers");
                            break;
                        }
                        s.values.push_back(v.get<double>());
                    }
            }
            r.report_unknown();
            return s;
        }

        std::string series_suffix(const SweepSpec &series, double value)
        {
            if (series.variable == "phase_design")
                return value == 0.0 ? "optimal" : "random";
            return series.variable + "_" + format_number(value);
        }

        int resolved_threads(const ExperimentConfig &c)
        {
            return c.threads > 0 ? c.threads : default_thread_count();
        }
    }

    ConfigError::ConfigError(std::vector<std::string> issues)
        : std::runtime_error("invalid configuration: " + join(issues, "; ")), issues_(std::move(issues))
    {
    }

    const std::vector<std::string> &sweep_variables()
    {
        static const std::vector<std::string> names = {
            "transmit_snr_db", "noise_power",     "rician_db",       "rician_bs_db",   "rician_ms_db",
            "nlos_paths_bs",   "nlos_paths_ms",   "carrier_frequency_hz", "vr_half_angle_deg", "tiles_v",
            "tiles_h",         "tile_gap_v",      "tile_gap_h",      "tile_elements",  "elements_v",
            "elements_h",      "element_spacing_wl", "bs_elements",  "ms_x",           "ms_y",
            "ms_z",            "phase_design"};
        return names;
    }

    Scenario ExperimentConfig::scenario() const
    {
        Scenario sc;
        sc.system = system;
        const double lambda = system.wavelength();
        sc.layout.tiles_v = tiles_v;
        sc.layout.tiles_h = tiles_h;
        sc.layout.tile_gap_v = tile_gap_v;
        sc.layout.tile_gap_h = tile_gap_h;
        sc.layout.tile_spec.n_v = elements_v;
        sc.layout.tile_spec.n_h = elements_h;
        sc.layout.tile_spec.spacing_v = element_spacing_wl * lambda;
        sc.layout.tile_spec.spacing_h = element_spacing_wl * lambda;
        sc.layout.center = saos_center;
        sc.bs_array.n_v = bs_elements_v;
        sc.bs_array.n_h = bs_elements_h;
        sc.bs_array.spacing_v = bs_spacing_wl * lambda;
        sc.bs_array.spacing_h = bs_spacing_wl * lambda;
        sc.bs_position = bs_position;
        return sc;
    }

    std::vector<std::string> check_config(const ExperimentConfig &c)
    {
        std::vector<std::string> e;
        const auto &s = c.system;
        if (!(s.carrier_frequency > 0.0) || !std::isfinite(s.carrier_frequency))
            e.push_back("system.carrier_frequency_hz: must be > 0");
        if (!(s.rician_bs >= 0.0) || std::isnan(s.rician_bs))
            e.push_back("system.rician_bs_db: must give a linear factor >= 0");
        if (!(s.rician_ms >= 0.0) || std::isnan(s.rician_ms))
            e.push_back("system.rician_ms_db: must give a linear factor >= 0");
        if (s.nlos_paths_bs < 1)
            e.push_back("system.nlos_paths_bs: must be >= 1");
        if (s.nlos_paths_ms < 1)
            e.push_back("system.nlos_paths_ms: must be >= 1");
        if (!(s.noise_power > 0.0) || !std::isfinite(s.noise_power))
            e.push_back("system.noise_power: must be > 0");
        if (!(s.vr_half_angle > 0.0) || s.vr_half_angle > std::numbers::pi + 1e-12)
            e.push_back("system.vr_half_angle_deg: must lie in (0, 180]");
        if (s.nlos_attenuation.kind == NlosAttenuationKind::fixed)
        {
            if (!(s.nlos_attenuation.fixed_bs >= 0.0))
                e.push_back("system.nlos_attenuation.bs: must be >= 0");
            if (!(s.nlos_attenuation.fixed_ms >= 0.0))
                e.push_back("system.nlos_attenuation.ms: must be >= 0");
        }

        if (c.tiles_v < 1)
            e.push_back("layout.tiles_v: must be >= 1");
        if (c.tiles_h < 1)
            e.push_back("layout.tiles_h: must be >= 1");
        if (!(c.tile_gap_v >= 0.0))
            e.push_back("layout.tile_gap_v_m: must be >= 0");
        if (!(c.tile_gap_h >= 0.0))
            e.push_back("layout.tile_gap_h_m: must be >= 0");
        if (c.elements_v < 1)
            e.push_back("layout.elements_v: must be >= 1");
        if (c.elements_h < 1)
            e.push_back("layout.elements_h: must be >= 1");
        if (!(c.element_spacing_wl > 0.0))
            e.push_back("layout.element_spacing_wavelengths: must be > 0");
        if (!c.saos_center.is_finite())
            e.push_back("layout.center: must be finite");

        if (c.bs_elements_v < 1)
            e.push_back("bs.elements_v: must be >= 1");
        if (c.bs_elements_h < 1)
            e.push_back("bs.elements_h: must be >= 1");
        if (!(c.bs_spacing_wl > 0.0))
            e.push_back("bs.spacing_wavelengths: must be > 0");
        if (!c.bs_position.is_finite())
            e.push_back("bs.position: must be finite");

        // The panel plane passes through the SAoS center with normal +x
        const Eigen::Vector3d normal = Eigen::Vector3d::UnitX();
        if (c.bs_position.is_finite() && c.saos_center.is_finite() &&
            std::abs((c.bs_position - c.saos_center).dot(normal)) == 0.0)
            e.push_back("bs.position: lies in the SAoS panel plane");

        const auto &r = c.ms_region;
        if (!r.min.is_finite() || !r.max.is_finite())
            e.push_back("ms.region: bounds must be finite");
        else if (r.min.x > r.max.x || r.min.y > r.max.y || r.min.z > r.max.z)
            e.push_back("ms.region: min must not exceed max");
        else if (c.saos_center.is_finite())
        {
            const double lo = (r.min - c.saos_center).dot(normal);
            const double hi = (r.max - c.saos_center).dot(normal);
            if (lo <= 0.0 && hi >= 0.0)
                e.push_back("ms.region: intersects the SAoS panel plane");
            else if (hi < 0.0)
                e.push_back("ms.region: lies behind the SAoS panel");
        }

        if (c.n_trials < 1)
            e.push_back("monte_carlo.n_trials: must be >= 1");
        if (c.n_positions < 1)
            e.push_back("monte_carlo.n_positions: must be >= 1");
        if (c.threads < 0)
            e.push_back("monte_carlo.threads: must be >= 0");

        auto check_sweep = [&](const std::optional<SweepSpec> &sw, const char *path) {
            if (!sw)
                return;
            const auto &names = sweep_variables();
            if (std::find(names.begin(), names.end(), sw->variable) == names.end())
            {
                e.push_back(std::string(path) + ".variable: unknown variable '" + sw->variable +
                            "'; valid names: " + join(names, ", "));
                return;
            }
            if (sw->values.empty())
                e.push_back(std::string(path) + ".values: must not be empty");
            for (const double v : sw->values)
            {
                ExperimentConfig probe = c;
                probe.sweep.reset();
                probe.series.reset();
                try
                {
                    apply_variable(probe, sw->variable, v);
                }
                catch (const ConfigError &err)
                {
                    for (const auto &i : err.issues())
                        e.push_back(std::string(path) + ".values: " + i);
                    continue;
                }
                for (const auto &i : check_config(probe))
                    e.push_back(std::string(path) + " (" + sw->variable + " = " + format_number(v) + "): " + i);
            }
        };
        check_sweep(c.sweep, "sweep");
        check_sweep(c.series, "series");
        return e;
    }

    void apply_variable(ExperimentConfig &c, std::string_view variable, double value)
    {
        const std::string name(variable);
        auto as_int = [&]() {
            if (!is_integral(value))
                throw ConfigError({name + ": value " + format_number(value) + " must be an integer"});
            return static_cast<int>(value);
        };
        auto require_point = [&]() {
            if (!c.ms_region.is_point())
                throw ConfigError({name + ": requires a fixed MS position, not a region"});
        };

        if (name == "transmit_snr_db")
            c.system.noise_power = db_to_linear(-value);
        else if (name == "noise_power")
            c.system.noise_power = value;
        else if (name == "rician_db")
            c.system.rician_bs = c.system.rician_ms = db_to_linear(value);
        else if (name == "rician_bs_db")
            c.system.rician_bs = db_to_linear(value);
        else if (name == "rician_ms_db")
            c.system.rician_ms = db_to_linear(value);
        else if (name == "nlos_paths_bs")
            c.system.nlos_paths_bs = as_int();
        else if (name == "nlos_paths_ms")
            c.system.nlos_paths_ms = as_int();
        else if (name == "carrier_frequency_hz")
            c.system.carrier_frequency = value;
        else if (name == "vr_half_angle_deg")
            c.system.vr_half_angle = value * deg;
        else if (name == "tiles_v")
            c.tiles_v = as_int();
        else if (name == "tiles_h")
            c.tiles_h = as_int();
        else if (name == "tile_gap_v")
            c.tile_gap_v = value;
        else if (name == "tile_gap_h")
            c.tile_gap_h = value;
        else if (name == "tile_elements")
            c.elements_v = c.elements_h = as_int();
        else if (name == "elements_v")
            c.elements_v = as_int();
        else if (name == "elements_h")
            c.elements_h = as_int();
        else if (name == "element_spacing_wl")
            c.element_spacing_wl = value;
        else if (name == "bs_elements")
            c.bs_elements_v = c.bs_elements_h = as_int();
        else if (name == "ms_x")
        {
            require_point();
            c.ms_region.min.x = c.ms_region.max.x = value;
        }
        else if (name == "ms_y")
        {
            require_point();
            c.ms_region.min.y = c.ms_region.max.y = value;
        }
        else if (name == "ms_z")
        {
            require_point();
            c.ms_region.min.z = c.ms_region.max.z = value;
        }
        else if (name == "phase_design")
        {
            if (value != 0.0 && value != 1.0)
                throw ConfigError({name + ": use 0 for optimal or 1 for random"});
            c.phase_design = value == 0.0 ? PhaseDesign::optimal : PhaseDesign::random;
        }
        else
            throw ConfigError({"unknown variable '" + name + "'; valid names: " + join(sweep_variables(), ", ")});
    }

    ExperimentConfig default_config()
    {
        ExperimentConfig c;
        c.name = "sweep";
        c.system.carrier_frequency = 28e9;
        c.system.rician_bs = c.system.rician_ms = db_to_linear(13.0);
        c.system.nlos_paths_bs = 3;
        c.system.nlos_paths_ms = 3;
        c.system.noise_power = db_to_linear(-50.0);
        c.system.vr_half_angle = 45.0 * deg;
        return c;
    }

    ExperimentConfig fig2_preset()
    {
        ExperimentConfig c = default_config();
        c.name = "fig2";
        c.sweep = SweepSpec{"transmit_snr_db", linspace_step(30.0, 70.0, 5.0)};
        c.series = SweepSpec{"phase_design", {0.0, 1.0}};
        c.n_trials = 10000;
        return c;
    }

    ExperimentConfig fig3_preset()
    {
        ExperimentConfig c = default_config();
        c.name = "fig3";
        c.sweep = SweepSpec{"tile_elements", {2, 3, 4, 5, 6, 7}};
        c.series = SweepSpec{"rician_db", {13.0, -40.0}};
        c.n_trials = 10000;
        return c;
    }

    ExperimentConfig fig4_preset()
    {
        ExperimentConfig c = default_config();
        c.name = "fig4";
        c.ms_region = {{3.0, -9.0, -2.0}, {5.0, 9.0, 2.0}};
        c.sweep = SweepSpec{"tile_gap_h", linspace_step(0.0, 6.0, 0.5)};
        c.series = SweepSpec{"tiles_h", {3, 4, 5, 6, 7}};
        c.n_positions = 400;
        c.n_trials = 10;
        return c;
    }

    ValidationResult validate_config(std::string_view raw_text, const ExperimentConfig &base)
    {
        ValidationResult out;
        json doc;
        try
        {
            doc = json::parse(raw_text.begin(), raw_text.end(), nullptr, true, true);
        }
        catch (const json::parse_error &err)
        {
            out.errors.push_back(std::string("document: ") + err.what());
            return out;
        }
        if (!doc.is_object())
        {
            out.errors.push_back("document: must be a JSON object");
            return out;
        }

        ExperimentConfig c = base;
        auto &errors = out.errors;
        SectionReader top(doc, "", errors);
        top.string("name", c.name);

        if (const json *sys = top.section("system"))
        {
            SectionReader r(*sys, "system", errors);
            r.number("carrier_frequency_hz", c.system.carrier_frequency);
            double k_db = std::numeric_limits<double>::quiet_NaN();
            r.number("rician_db", k_db);
            if (!std::isnan(k_db))
                c.system.rician_bs = c.system.rician_ms = db_to_linear(k_db);
            double kb_db = std::numeric_limits<double>::quiet_NaN(), km_db = kb_db;
            r.number("rician_bs_db", kb_db);
            r.number("rician_ms_db", km_db);
            if (!std::isnan(kb_db))
                c.system.rician_bs = db_to_linear(kb_db);
            if (!std::isnan(km_db))
                c.system.rician_ms = db_to_linear(km_db);
            r.boolean("los_only", c.system.los_only);
            r.integer("nlos_paths_bs", c.system.nlos_paths_bs);
            r.integer("nlos_paths_ms", c.system.nlos_paths_ms);

            const bool has_snr = sys->is_object() && sys->contains("transmit_snr_db");
            const bool has_noise = sys->is_object() && sys->contains("noise_power");
            if (has_snr && has_noise)
                errors.push_back("system: give either transmit_snr_db or noise_power, not both");
            double snr_db = std::numeric_limits<double>::quiet_NaN();
            r.number("transmit_snr_db", snr_db);
            if (!std::isnan(snr_db))
                c.system.noise_power = db_to_linear(-snr_db);
            r.number("noise_power", c.system.noise_power);

            double vr_deg = c.system.vr_half_angle / deg;
            r.number("vr_half_angle_deg", vr_deg);
            c.system.vr_half_angle = vr_deg * deg;

            if (const json *att = r.section("nlos_attenuation"))
            {
                SectionReader a(*att, "system.nlos_attenuation", errors);
                std::string policy = c.system.nlos_attenuation.kind == NlosAttenuationKind::fixed ? "fixed"
                                                                                                  : "matched_los";
                a.string("policy", policy);
                if (policy == "matched_los")
                    c.system.nlos_attenuation.kind = NlosAttenuationKind::matched_los;
                else if (policy == "fixed")
                    c.system.nlos_attenuation.kind = NlosAttenuationKind::fixed;
                else
                    errors.push_back("system.nlos_attenuation.policy: must be 'matched_los' or 'fixed'");
                a.number("bs", c.system.nlos_attenuation.fixed_bs);
                a.number("ms", c.system.nlos_attenuation.fixed_ms);
                a.boolean("gate_ms_by_vr", c.system.nlos_attenuation.gate_ms_by_vr);
                a.report_unknown();
            }
            std::string model = angle_model_name(c.system.nlos_angles);
            r.string("nlos_angle_model", model);
            if (model == "virtual_uniform")
                c.system.nlos_angles = NlosAngleModel::virtual_uniform;
            else if (model == "hemisphere")
                c.system.nlos_angles = NlosAngleModel::hemisphere;
            else
                errors.push_back("system.nlos_angle_model: must be 'virtual_uniform' or 'hemisphere'");
            r.report_unknown();
        }

        if (const json *lay = top.section("layout"))
        {
            SectionReader r(*lay, "layout", errors);
            r.integer("tiles_v", c.tiles_v);
            r.integer("tiles_h", c.tiles_h);
            r.number("tile_gap_v_m", c.tile_gap_v);
            r.number("tile_gap_h_m", c.tile_gap_h);
            r.integer("elements_v", c.elements_v);
            r.integer("elements_h", c.elements_h);
            r.number("element_spacing_wavelengths", c.element_spacing_wl);
            r.position("center", c.saos_center);
            r.report_unknown();
        }

        if (const json *bs = top.section("bs"))
        {
            SectionReader r(*bs, "bs", errors);
            r.integer("elements_v", c.bs_elements_v);
            r.integer("elements_h", c.bs_elements_h);
            r.number("spacing_wavelengths", c.bs_spacing_wl);
            r.position("position", c.bs_position);
            r.report_unknown();
        }

        if (const json *ms = top.section("ms"))
        {
            SectionReader r(*ms, "ms", errors);
            const bool has_point = ms->is_object() && ms->contains("position");
            const bool has_region = ms->is_object() && ms->contains("region");
            if (has_point && has_region)
                errors.push_back("ms: give either position or region, not both");
            Position3 p = c.ms_region.min;
            r.position("position", p);
            if (has_point)
                c.ms_region = MsRegion::point(p);
            if (const json *reg = r.section("region"))
            {
                SectionReader rr(*reg, "ms.region", errors);
                rr.position("min", c.ms_region.min);
                rr.position("max", c.ms_region.max);
                rr.report_unknown();
            }
            r.report_unknown();
        }

        if (const json *sw = top.section("sweep"))
            c.sweep = read_sweep(sw, "sweep", errors);
        if (const json *se = top.section("series"))
        {
            if (se->is_null())
                c.series.reset();
            else
                c.series = read_sweep(se, "series", errors);
        }

        if (const json *mc = top.section("monte_carlo"))
        {
            SectionReader r(*mc, "monte_carlo", errors);
            r.integer("n_trials", c.n_trials);
            r.integer("n_positions", c.n_positions);
            r.seed("master_seed", c.master_seed);
            r.integer("threads", c.threads);
            r.report_unknown();
        }

        std::string design = phase_design_name(c.phase_design);
        top.string("phase_design", design);
        if (design == "optimal")
            c.phase_design = PhaseDesign::optimal;
        else if (design == "random")
            c.phase_design = PhaseDesign::random;
        else
            errors.push_back("phase_design: must be 'optimal' or 'random'");
        top.report_unknown();

        for (auto &issue : check_config(c))
            errors.push_back(std::move(issue));
        if (errors.empty())
            out.config = std::move(c);
        return out;
    }

    std::string config_to_json(const ExperimentConfig &c)
    {
        json sys = {
            {"carrier_frequency_hz", c.system.carrier_frequency},
            {"rician_bs_db", linear_to_db(c.system.rician_bs)},
            {"rician_ms_db", linear_to_db(c.system.rician_ms)},
            {"los_only", c.system.los_only},
            {"nlos_paths_bs", c.system.nlos_paths_bs},
            {"nlos_paths_ms", c.system.nlos_paths_ms},
            {"noise_power", c.system.noise_power},
            {"vr_half_angle_deg", c.system.vr_half_angle / deg},
            {"nlos_attenuation",
             {{"policy", c.system.nlos_attenuation.kind == NlosAttenuationKind::fixed ? "fixed" : "matched_los"},
              {"bs", c.system.nlos_attenuation.fixed_bs},
              {"ms", c.system.nlos_attenuation.fixed_ms},
              {"gate_ms_by_vr", c.system.nlos_attenuation.gate_ms_by_vr}}},
            {"nlos_angle_model", angle_model_name(c.system.nlos_angles)}};
        json doc = {
            {"name", c.name},
            {"system", sys},
            {"layout",
             {{"tiles_v", c.tiles_v},
              {"tiles_h", c.tiles_h},
              {"tile_gap_v_m", c.tile_gap_v},
              {"tile_gap_h_m", c.tile_gap_h},
              {"elements_v", c.elements_v},
              {"elements_h", c.elements_h},
              {"element_spacing_wavelengths", c.element_spacing_wl},
              {"center", position_json(c.saos_center)}}},
            {"bs",
             {{"elements_v", c.bs_elements_v},
              {"elements_h", c.bs_elements_h},
              {"spacing_wavelengths", c.bs_spacing_wl},
              {"position", position_json(c.bs_position)}}},
            {"monte_carlo",
             {{"n_trials", c.n_trials}, {"n_positions", c.n_positions}, {"master_seed", c.master_seed}}},
            {"phase_design", phase_design_name(c.phase_design)}};
        if (c.ms_region.is_point())
            doc["ms"] = {{"position", position_json(c.ms_region.min)}};
        else
            doc["ms"] = {{"region", {{"min", position_json(c.ms_region.min)}, {"max", position_json(c.ms_region.max)}}}};
        if (c.sweep)
            doc["sweep"] = {{"variable", c.sweep->variable}, {"values", c.sweep->values}};
        if (c.series)
            doc["series"] = {{"variable", c.series->variable}, {"values", c.series->values}};
        return doc.dump(2);
    }

    std::uint64_t config_hash(const ExperimentConfig &config)
    {
        // FNV-1a over the canonical JSON form
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const unsigned char ch : config_to_json(config))
        {
            h ^= ch;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    ResultRow run_point(const ExperimentConfig &config)
    {
        if (auto issues = check_config(config); !issues.empty())
            throw ConfigError(std::move(issues));
        const Scenario sc = config.scenario();
        const int threads = resolved_threads(config);
        ResultRow row;
        row.n_trials = config.n_trials;
        if (config.ms_region.is_point())
        {
            LinkGeometry geometry = link_geometry(sc.system, sc.layout, sc.bs_array, sc.bs_position,
                                                  config.ms_region.min);
            const ReflectionPhases phases = design_phases(geometry, config.phase_design, config.master_seed);
            const SignalPowerBreakdown s = mean_signal_power(sc.system, geometry, phases);
            const ChannelSynthesizer synth(sc.system, std::move(geometry));
            const ErgodicEstimate e = ergodic_se(synth, phases, config.n_trials, config.master_seed, threads);
            row.mc_se = e.mean_se;
            row.mc_stderr = e.std_error;
            row.approx_se = approx_se(s.total, sc.system.noise_power);
            row.rx_snr_db = linear_to_db(e.mean_snr);
            row.n_positions = 1;
        }
        else
        {
            const PositionAveragedEstimate e =
                ergodic_se_over_positions(sc, config.ms_region, config.phase_design, config.n_positions,
                                          config.n_trials, config.master_seed, threads);
            row.mc_se = e.mc.mean_se;
            row.mc_stderr = e.mc.std_error;
            row.approx_se = e.approx_se;
            row.rx_snr_db = linear_to_db(e.mc.mean_snr);
            row.n_positions = e.n_positions;
        }
        return row;
    }

    std::vector<ExperimentResult> run_sweep(const ExperimentConfig &config)
    {
        std::vector<std::string> issues = check_config(config);
        if (!config.sweep)
            issues.push_back("sweep: a sweep variable and values are required");
        if (!issues.empty())
            throw ConfigError(std::move(issues));

        const std::string config_json = config_to_json(config);
        const std::uint64_t hash = config_hash(config);
        const std::vector<double> series_values = config.series ? config.series->values : std::vector<double>{0.0};

        std::vector<ExperimentResult> results;
        for (const double sv : series_values)
        {
            const auto start = std::chrono::steady_clock::now();
            ExperimentConfig base = config;
            base.sweep.reset();
            base.series.reset();
            ExperimentResult res;
            res.name = config.name;
            if (config.series)
            {
                apply_variable(base, config.series->variable, sv);
                res.name += "_" + series_suffix(*config.series, sv);
                res.metadata.series_variable = config.series->variable;
                res.metadata.series_value = sv;
            }
            for (const double v : config.sweep->values)
            {
                ExperimentConfig point = base;
                apply_variable(point, config.sweep->variable, v);
                ResultRow row = run_point(point);
                row.sweep_value = v;
                res.rows.push_back(row);
            }
            res.metadata.config_json = config_json;
            res.metadata.config_hash = hash;
            res.metadata.seed = config.master_seed;
            res.metadata.sweep_variable = config.sweep->variable;
            res.metadata.wall_clock_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            results.push_back(std::move(res));
        }
        return results;
    }

    std::vector<ExperimentResult> run_fig2(const ExperimentConfig &config)
    {
        return run_sweep(config);
    }

    std::vector<ExperimentResult> run_fig3(const ExperimentConfig &config)
    {
        std::vector<ExperimentResult> results = run_sweep(config);
        for (auto &res : results)
        {
            ExperimentConfig probe = config;
            probe.sweep.reset();
            probe.series.reset();
            if (config.series)
                apply_variable(probe, config.series->variable, res.metadata.series_value);
            for (auto &row : res.rows)
            {
                ExperimentConfig point = probe;
                apply_variable(point, config.sweep->variable, row.sweep_value);
                row.sweep_value = static_cast<double>(point.tiles_v) * point.tiles_h * point.elements_v *
                                  point.elements_h;
            }
            res.metadata.sweep_variable = "total_elements";
        }
        return results;
    }

    std::vector<ExperimentResult> run_fig4(const ExperimentConfig &config)
    {
        return run_sweep(config);
    }

    std::string to_csv(const ExperimentResult &result)
    {
        std::string out = csv_header;
        out += '\n';
        for (const auto &r : result.rows)
        {
            out += format_number(r.sweep_value) + ',' + format_number(r.mc_se) + ',' + format_number(r.mc_stderr) +
                   ',' + format_number(r.approx_se) + ',' + format_number(r.rx_snr_db) + ',' +
                   std::to_string(r.n_trials) + ',' + std::to_string(r.n_positions) + '\n';
        }
        return out;
    }

    std::string to_json(const ExperimentResult &result, bool include_rows)
    {
        const auto &m = result.metadata;
        std::ostringstream hash;
        hash << std::hex << m.config_hash;
        json doc = {{"name", result.name},
                    {"metadata",
                     {{"config_hash", hash.str()},
                      {"seed", m.seed},
                      {"version", m.version},
                      {"sweep_variable", m.sweep_variable},
                      {"series_variable", m.series_variable},
                      {"series_value", m.series_value},
                      {"wall_clock_s", m.wall_clock_s},
                      {"columns", json::parse("[\"sweep_value\",\"mc_se_bps_hz\",\"mc_stderr\",\"approx_se_bps_hz\","
                                              "\"rx_snr_db\",\"n_trials\",\"n_positions\"]")},
                      {"config", json::parse(m.config_json)}}}};
        if (include_rows)
        {
            json rows = json::array();
            for (const auto &r : result.rows)
                rows.push_back({r.sweep_value, r.mc_se, r.mc_stderr, r.approx_se,
                                std::isfinite(r.rx_snr_db) ? json(r.rx_snr_db) : json(nullptr), r.n_trials,
                                r.n_positions});
            doc["rows"] = rows;
        }
        return doc.dump(2) + "\n";
    }

    std::vector<std::filesystem::path> write_result(const ExperimentResult &result,
                                                    const std::filesystem::path &out_dir, OutputFormat format)
    {
        std::filesystem::create_directories(out_dir);
        std::vector<std::filesystem::path> written;
        auto write = [&](const std::filesystem::path &p, const std::string &text) {
            std::ofstream f(p, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot open " + p.string() + " for writing");
            f << text;
            if (!f)
                throw std::runtime_error("failed writing " + p.string());
            written.push_back(p);
        };
        if (format == OutputFormat::csv)
        {
            write(out_dir / (result.name + ".csv"), to_csv(result));
            write(out_dir / (result.name + ".meta.json"), to_json(result, false));
        }
        else
            write(out_dir / (result.name + ".json"), to_json(result, true));
        return written;
    }
}
