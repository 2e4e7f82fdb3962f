// Copyright 2026 The ringtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch front end: a flat JSON config in, one CSV or JSON table out.

#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringtherm/error.hpp"
#include "ringtherm/experiments.hpp"
#include "ringtherm/qfi.hpp"
#include "ringtherm/spectrum.hpp"
#include "ringtherm/table_io.hpp"

#ifndef RINGTHERM_VERSION
#define RINGTHERM_VERSION "0.1.0"
#endif

namespace ringtherm::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kPartialFailure = 2, kInternalError = 3 };

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"spectrum", "eq-scan", "dyn-scan", "time-opt",
                                                "t-e",      "t-opt",   "phi-opt",  "crb"};
    return names;
}

/// A range "min..max step" or an explicit list; the list wins when both are
/// given.
struct GridSpec {
    std::optional<double> min, max, step;
    std::vector<double> values;

    [[nodiscard]] bool empty() const { return values.empty() && !min && !max && !step; }

    [[nodiscard]] std::vector<double> expand(const std::string& name) const {
        if (!values.empty()) return values;
        if (!min || !max || !step) {
            throw Error(ErrorKind::ConfigError, name + ": need " + name + "_values or all of " + name + "_min, " +
                                                    name + "_max and " + name + "_step");
        }
        if (!(*step > 0.0) || *max < *min) {
            throw Error(ErrorKind::ConfigError, name + "_step: must be positive with " + name + "_max >= " + name +
                                                    "_min");
        }
        std::vector<double> out;
        const auto count = static_cast<long long>(std::floor((*max - *min) / *step + 1e-9));
        for (long long i = 0; i <= count; ++i) out.push_back(*min + static_cast<double>(i) * *step);
        return out;
    }
};

struct RunConfig {
    std::string subcommand;
    int n_atoms = 20;
    std::vector<int> n_values;
    double coupling = 0.0;
    double transition_freq = 1.0;
    std::optional<double> phi;
    std::optional<double> temperature;
    GridSpec temperature_grid;
    GridSpec t_grid;
    GridSpec phi_grid;
    ExperimentOptions options;
    std::string output;
    std::string format = "csv";
    long long repetitions = 1;
    std::string input;
    std::string qfi_column;
    unsigned long long seed = 0;
    bool record_wall_time = false;
    /// Canonical echo of the parsed document (sorted keys, compact).
    std::string echo;
};

namespace detail {

using json = nlohmann::json;

template <class T>
T typed(const json& v, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw std::invalid_argument("expected a number");
        } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw std::invalid_argument("expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw std::invalid_argument("expected a string");
        }
        return v.get<T>();
    } catch (const std::exception& e) {
        throw Error(ErrorKind::ConfigError, key + ": " + e.what());
    }
}

template <class T>
std::vector<T> typed_list(const json& v, const std::string& key) {
    if (!v.is_array() || v.empty()) {
        throw Error(ErrorKind::ConfigError, key + ": expected a non-empty list");
    }
    std::vector<T> out;
    for (const auto& item : v) out.push_back(typed<T>(item, key));
    return out;
}

inline void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw Error(ErrorKind::ConfigError, key + ": " + what);
}

} // namespace detail

/// Parses a flat JSON object. Unknown keys and type mismatches are
/// ConfigErrors naming the key.
inline RunConfig parse_config(const std::string& text, const std::string& subcommand) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ConfigError, std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::ConfigError, "config: top level must be an object");
    }
    RunConfig c;
    c.subcommand = subcommand;
    if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
        throw Error(ErrorKind::ConfigError, "subcommand: unknown subcommand '" + subcommand + "'");
    }

    auto& o = c.options;
    for (const auto& [key, v] : doc.items()) {
        using detail::typed;
        using detail::typed_list;
        if (v.is_object()) throw Error(ErrorKind::ConfigError, key + ": nested objects are not allowed");
        if (key == "n_atoms") c.n_atoms = typed<int>(v, key);
        else if (key == "n_values") c.n_values = typed_list<int>(v, key);
        else if (key == "coupling") c.coupling = typed<double>(v, key);
        else if (key == "transition_freq") c.transition_freq = typed<double>(v, key);
        else if (key == "phi") c.phi = typed<double>(v, key);
        else if (key == "temperature") c.temperature = typed<double>(v, key);
        else if (key == "temperature_min") c.temperature_grid.min = typed<double>(v, key);
        else if (key == "temperature_max") c.temperature_grid.max = typed<double>(v, key);
        else if (key == "temperature_step") c.temperature_grid.step = typed<double>(v, key);
        else if (key == "temperature_values") c.temperature_grid.values = typed_list<double>(v, key);
        else if (key == "t_min") c.t_grid.min = typed<double>(v, key);
        else if (key == "t_max") c.t_grid.max = typed<double>(v, key);
        else if (key == "t_step") c.t_grid.step = typed<double>(v, key);
        else if (key == "t_values") c.t_grid.values = typed_list<double>(v, key);
        else if (key == "phi_min") c.phi_grid.min = typed<double>(v, key);
        else if (key == "phi_max") c.phi_grid.max = typed<double>(v, key);
        else if (key == "phi_step") c.phi_grid.step = typed<double>(v, key);
        else if (key == "phi_values") c.phi_grid.values = typed_list<double>(v, key);
        else if (key == "rel_tol") o.integrator.rel_tol = typed<double>(v, key);
        else if (key == "abs_tol") o.integrator.abs_tol = typed<double>(v, key);
        else if (key == "max_step") o.integrator.max_step = typed<double>(v, key);
        else if (key == "method") {
            const auto m = typed<std::string>(v, key);
            if (m == "sdirk43") o.integrator.method = IntegratorMethod::Sdirk43;
            else if (m == "dopri54") o.integrator.method = IntegratorMethod::Dopri54;
            else throw Error(ErrorKind::ConfigError, "method: expected sdirk43 or dopri54, got '" + m + "'");
        }
        else if (key == "eps_pop") o.qfi.eps_pop = typed<double>(v, key);
        else if (key == "eps_coherence") o.qfi.eps_coherence = typed<double>(v, key);
        else if (key == "time_growth") o.time_growth = typed<double>(v, key);
        else if (key == "time_first") o.time_first = typed<double>(v, key);
        else if (key == "equilibrium_rel") o.equilibrium_rel = typed<double>(v, key);
        else if (key == "equilibrium_abs") o.equilibrium_abs = typed<double>(v, key);
        else if (key == "plateau_rel") o.plateau_rel = typed<double>(v, key);
        else if (key == "time_rel_tol") o.time_rel_tol = typed<double>(v, key);
        else if (key == "temperature_rel_tol") o.temperature_rel_tol = typed<double>(v, key);
        else if (key == "phi_tol") o.phi_tol = typed<double>(v, key);
        else if (key == "te_criterion") o.te_criterion = typed<double>(v, key);
        else if (key == "te_rel_tol") o.te_rel_tol = typed<double>(v, key);
        else if (key == "max_horizon") o.max_horizon = typed<double>(v, key);
        else if (key == "workers") o.workers = static_cast<std::size_t>(typed<int>(v, key));
        else if (key == "output") c.output = typed<std::string>(v, key);
        else if (key == "format") c.format = typed<std::string>(v, key);
        else if (key == "repetitions") c.repetitions = typed<long long>(v, key);
        else if (key == "input") c.input = typed<std::string>(v, key);
        else if (key == "qfi_column") c.qfi_column = typed<std::string>(v, key);
        else if (key == "seed") c.seed = typed<unsigned long long>(v, key);
        else if (key == "record_wall_time") c.record_wall_time = typed<bool>(v, key);
        else throw Error(ErrorKind::ConfigError, key + ": unknown key");
    }

    using detail::require;
    require(c.format == "csv" || c.format == "json", "format", "must be csv or json");
    require(c.repetitions >= 1, "repetitions", "must be at least 1");
    require(doc.value("workers", 1) >= 1, "workers", "must be at least 1");
    require(o.integrator.rel_tol > 0.0, "rel_tol", "must be positive");
    require(o.integrator.abs_tol > 0.0, "abs_tol", "must be positive");
    require(o.integrator.max_step > 0.0, "max_step", "must be positive");
    require(o.time_growth > 1.0, "time_growth", "must exceed 1");
    require(o.time_first > 0.0, "time_first", "must be positive");
    require(o.equilibrium_rel >= 0.0 && o.equilibrium_abs >= 0.0, "equilibrium_rel", "slack must be non-negative");
    require(o.plateau_rel >= 0.0, "plateau_rel", "must be non-negative");
    require(o.te_criterion > 0.0, "te_criterion", "must be positive");
    require(o.te_rel_tol > 0.0, "te_rel_tol", "must be positive");
    require(o.max_horizon > 0.0, "max_horizon", "must be positive");
    if (c.phi) require(*c.phi >= 0.0 && *c.phi <= std::numbers::pi / 2.0, "phi", "must lie in [0, pi/2]");
    if (c.temperature) require(*c.temperature > 0.0, "temperature", "must be positive");
    for (int n : c.n_values) require(n >= 2, "n_values", "every entry must be at least 2");

    // Parameter checks are reported against the key that feeds them.
    auto check_params = [&](int n) {
        try {
            (void)validate_params(n, c.coupling, c.transition_freq);
        } catch (const Error& e) {
            const char* key = e.kind() == ErrorKind::TooFewAtoms       ? "n_atoms"
                              : e.kind() == ErrorKind::CouplingOutOfRange ? "coupling"
                                                                         : "transition_freq";
            throw Error(ErrorKind::ConfigError, std::string(key) + ": " + e.what());
        }
    };
    if (c.n_values.empty()) check_params(c.n_atoms);
    for (int n : c.n_values) check_params(n);
    if (!c.temperature_grid.empty()) {
        for (double t : c.temperature_grid.expand("temperature")) {
            require(t > 0.0, "temperature_values", "temperatures must be positive");
        }
    }
    if (subcommand == "crb") require(!c.input.empty(), "input", "crb needs an input table");

    c.echo = doc.dump();
    return c;
}

namespace detail {

inline ScanTable spectrum_table(const ProbeParams& p) {
    ScanTable t;
    t.kind = "spectrum";
    // section 0: levels (M, E_M); section 1: transitions M -> M-1 (M, w_M, Gamma_M)
    t.columns = {"section", "M", "E_M", "omega_M", "Gamma_M"};
    for (int k = 0; k <= p.n_atoms; ++k) {
        const auto level = LevelIndex::from_offset(p, k);
        t.add_row({0.0, level.projection(p), energy(p, level), kNaN, kNaN});
    }
    for (int k = 1; k <= p.n_atoms; ++k) {
        const auto level = LevelIndex::from_offset(p, k);
        t.add_row({1.0, level.projection(p), kNaN, gap(p, level), decay_weight(p, level)});
    }
    const auto [high, low] = extreme_gap_trends(p);
    t.summary = {{"Delta_E_H", high}, {"Delta_E_L", low}};
    return t;
}

inline std::vector<int> atom_counts(const RunConfig& c) {
    return c.n_values.empty() ? std::vector<int>{c.n_atoms} : c.n_values;
}

inline std::vector<double> temperatures_or_default(const RunConfig& c) {
    if (!c.temperature_grid.empty()) return c.temperature_grid.expand("temperature");
    GridSpec def{0.01, 3.0, 0.005, {}};
    return def.expand("temperature");
}

inline void append_fit(ScanTable& t, const std::string& x, const std::string& y) {
    std::size_t ok = 0;
    for (const auto& s : t.status) ok += s == "ok";
    if (ok < 3) return;
    const ScalingFit fit = scaling_fit(t, x, y);
    t.summary.emplace_back("slope", fit.exponent);
    t.summary.emplace_back("prefactor", fit.prefactor);
    t.summary.emplace_back("residual", fit.residual);
}

inline ScanTable crb_table(const RunConfig& c) {
    std::ifstream in(c.input);
    if (!in) throw Error(ErrorKind::ConfigError, "input: cannot open '" + c.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const bool is_json = c.input.ends_with(".json");
    ScanTable src = is_json ? from_json(buf.str()) : from_csv(buf.str());

    std::string col = c.qfi_column;
    if (col.empty()) {
        for (const char* cand : {"Q_e", "Q_M", "Q_opt", "Q_d"}) {
            if (std::find(src.columns.begin(), src.columns.end(), cand) != src.columns.end()) {
                col = cand;
                break;
            }
        }
    }
    if (col.empty() || std::find(src.columns.begin(), src.columns.end(), col) == src.columns.end()) {
        throw Error(ErrorKind::ConfigError, "qfi_column: input table has no QFI column '" + col + "'");
    }
    const std::size_t qi = src.column(col);

    ScanTable t;
    t.kind = "crb";
    t.columns = src.columns;
    t.columns.push_back("delta_T");
    for (std::size_t i = 0; i < src.rows.size(); ++i) {
        auto row = src.rows[i];
        std::string status = src.status[i];
        double bound = kNaN;
        if (status == "ok") {
            try {
                bound = cramer_rao_bound(row[qi], c.repetitions);
            } catch (const Error& e) {
                status = std::string(to_string(e.kind()));
            }
        }
        row.push_back(bound);
        t.add_row(std::move(row), status);
    }
    t.summary = {{"repetitions", static_cast<double>(c.repetitions)}};
    return t;
}

} // namespace detail

/// Computes the table for `c.subcommand` (no file output).
inline ScanTable compute(const RunConfig& c) {
    const ExperimentOptions& o = c.options;
    const auto& cmd = c.subcommand;
    if (cmd == "spectrum") {
        return detail::spectrum_table(validate_params(c.n_atoms, c.coupling, c.transition_freq));
    }
    if (cmd == "eq-scan") {
        return equilibrium_scan(validate_params(c.n_atoms, c.coupling, c.transition_freq),
                                detail::temperatures_or_default(c), o.workers);
    }
    if (cmd == "dyn-scan") {
        ScanGrid grid;
        grid.params = validate_params(c.n_atoms, c.coupling, c.transition_freq);
        grid.phi = c.phi.value_or(std::numbers::pi / 4.0);
        grid.temperature_values = detail::temperatures_or_default(c);
        grid.t_values = c.t_grid.expand("t");
        return dynamic_scan(grid, o);
    }
    if (cmd == "time-opt") {
        const double phi = c.phi.value_or(std::numbers::pi / 4.0);
        const auto temps = detail::temperatures_or_default(c);
        ScanTable t;
        t.kind = "time-opt";
        t.columns = {"N", "T", "Q_M", "t_star", "Q_e", "equilibrated"};
        for (int n : detail::atom_counts(c)) {
            const ScanTable sub = time_optimized_qfi(validate_params(n, c.coupling, c.transition_freq), phi, temps, o);
            for (std::size_t i = 0; i < sub.rows.size(); ++i) {
                auto row = sub.rows[i];
                row.insert(row.begin(), static_cast<double>(n));
                t.add_row(std::move(row), sub.status[i]);
            }
            for (const auto& [k, v] : sub.summary) t.summary.emplace_back(k + "[N=" + std::to_string(n) + "]", v);
        }
        return t;
    }
    if (cmd == "t-e") {
        const double phi = c.phi.value_or(0.0);
        const auto temps = detail::temperatures_or_default(c);
        const auto ns = detail::atom_counts(c);
        const auto cells = parallel_map(ns.size(), o.workers, [&](std::size_t i) {
            const ProbeParams p = validate_params(ns[i], c.coupling, c.transition_freq);
            const double temp = c.temperature ? *c.temperature : equilibrium_peak(p, temps).first;
            return std::pair{temp, equilibration_time(p, phi, temp, o)};
        });
        ScanTable t;
        t.kind = "t-e";
        t.columns = {"N", "T", "t_e"};
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (cells[i].ok()) {
                t.add_row({static_cast<double>(ns[i]), cells[i].value->first, cells[i].value->second});
            } else {
                t.add_row({static_cast<double>(ns[i]), kNaN, kNaN}, cells[i].error);
            }
        }
        detail::append_fit(t, "N", "t_e");
        return t;
    }
    if (cmd == "t-opt") {
        const double phi = c.phi.value_or(std::numbers::pi / 4.0);
        const auto temps = detail::temperatures_or_default(c);
        ScanTable t;
        t.kind = "t-opt";
        t.columns = {"N", "T_opt", "t_opt", "Q_opt", "equilibrated"};
        for (int n : detail::atom_counts(c)) {
            try {
                const OptimalPoint op =
                    optimal_measurement_time(validate_params(n, c.coupling, c.transition_freq), phi, temps, o);
                t.add_row({static_cast<double>(n), op.temperature_opt, op.t_opt, op.qfi, op.equilibrated ? 1.0 : 0.0});
            } catch (const Error& e) {
                t.add_row({static_cast<double>(n), kNaN, kNaN, kNaN, kNaN}, std::string(to_string(e.kind())));
            }
        }
        detail::append_fit(t, "N", "t_opt");
        return t;
    }
    if (cmd == "phi-opt") {
        std::vector<double> phis;
        if (c.phi_grid.empty()) {
            for (int i = 0; i <= 16; ++i) phis.push_back(std::numbers::pi / 2.0 * i / 16.0);
        } else {
            phis = c.phi_grid.expand("phi");
        }
        return optimize_phi(validate_params(c.n_atoms, c.coupling, c.transition_freq),
                            detail::temperatures_or_default(c), phis, o)
            .table;
    }
    if (cmd == "crb") {
        return detail::crb_table(c);
    }
    throw Error(ErrorKind::ConfigError, "subcommand: unknown subcommand '" + cmd + "'");
}

inline std::string render(const ScanTable& t, const std::string& format) {
    return format == "json" ? to_json(t) : to_csv(t);
}

/// Runs one subcommand end to end. `config_text` is the raw config file;
/// `out_override`, `format_override` and `workers_override` come from the
/// command line and win over the config. The result goes to the output
/// path, or to `std_out` when there is none.
inline int run(const std::string& subcommand, const std::string& config_text, const std::string& out_override = "",
               const std::string& format_override = "", std::size_t workers_override = 0,
               std::ostream& std_out = std::cout, std::ostream& std_err = std::cerr) {
    RunConfig cfg;
    try {
        cfg = parse_config(config_text, subcommand);
        if (!format_override.empty()) {
            if (format_override != "csv" && format_override != "json") {
                throw Error(ErrorKind::ConfigError, "format: must be csv or json");
            }
            cfg.format = format_override;
        }
        if (!out_override.empty()) cfg.output = out_override;
        if (workers_override > 0) cfg.options.workers = workers_override;
    } catch (const Error& e) {
        std_err << e.what() << '\n';
        return kConfigError;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        ScanTable table = compute(cfg);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.meta.insert(table.meta.begin(), {{"ringtherm_version", RINGTHERM_VERSION},
                                               {"subcommand", cfg.subcommand},
                                               {"config", cfg.echo}});
        if (cfg.record_wall_time) table.meta.emplace_back("wall_time_s", format_number(wall));
        const std::string text = render(table, cfg.format);
        if (cfg.output.empty()) {
            std_out << text;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) {
                std_err << "ConfigError: output: cannot write '" << cfg.output << "'\n";
                return kConfigError;
            }
            out << text;
        }
        std_err << "ringtherm " << cfg.subcommand << ": " << table.rows.size() << " rows in " << wall << " s\n";
        return table.all_ok() ? kSuccess : kPartialFailure;
    } catch (const Error& e) {
        std_err << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? kConfigError : kPartialFailure;
    } catch (const std::exception& e) {
        std_err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace ringtherm::cli
