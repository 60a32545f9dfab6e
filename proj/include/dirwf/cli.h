// Copyright 2026 The dirwf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration and the verify / reconstruct / sweep / sample workflows.
//
// Config file (JSON):
//
//   {
//     "state": {"type": "explicit", "dim": 2, "amplitudes": [[re, im], ...]}
//           or {"type": "haar", "dim": 8, "seed": 7},
//     "theta": 1.0            (exactly one of theta / theta_grid)
//     "theta_grid": [0.1, 0.2] or "default",
//     "modes": ["strong_joint", "strong_conditional", "strong_oracle_scaled", "weak_value"],
//     "shots_per_setting": 100000,
//     "seed": 1,
//     "output": {"path": "out.csv", "format": "csv"}
//   }
//
// Every output file starts with the resolved config. Floating-point values
// are printed with 17 significant digits.

#ifndef DIRWF_CLI_H
#define DIRWF_CLI_H

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dirwf/analysis.h"
#include "dirwf/errors.h"
#include "dirwf/experiment.h"
#include "dirwf/protocol.h"
#include "dirwf/qstate.h"
#include "dirwf/reconstruct.h"

namespace dirwf::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Malformed or inconsistent configuration.
struct ConfigError : Error {
    using Error::Error;
};

enum class Command { verify, reconstruct, sweep, sample };

inline const char *to_string(Command c) {
    switch (c) {
        case Command::verify:
            return "verify";
        case Command::reconstruct:
            return "reconstruct";
        case Command::sweep:
            return "sweep";
        case Command::sample:
            return "sample";
    }
    return "?";
}

enum class OutputFormat { csv, json };

struct StateSpec {
    enum class Kind { explicit_amplitudes, haar };
    Kind kind = Kind::haar;
    size_t dim = 0;
    std::vector<Complex> amplitudes;
    uint64_t seed = 0;
};

struct RunConfig {
    StateSpec state;
    std::optional<double> theta;
    std::optional<std::vector<double>> theta_grid;
    /// theta_grid was given as "default".
    bool default_grid = false;
    std::vector<Mode> modes;
    std::optional<uint64_t> shots_per_setting;
    uint64_t seed = 0;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
};

/// %.17g
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline void write_json(std::ostream &out, const Json &j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent >= 0) {
            out << '\n' << std::string(static_cast<size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out << ',';
                }
                first = false;
                newline(depth + 1);
                out << Json(it.key()).dump() << (indent >= 0 ? ": " : ":");
                write_json(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << '[';
            bool first = true;
            for (const auto &v : j) {
                if (!first) {
                    out << ',';
                }
                first = false;
                newline(depth + 1);
                write_json(out, v, indent, depth + 1);
            }
            newline(depth);
            out << ']';
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            out << (std::isfinite(v) ? format_double(v) : "null");
            return;
        }
        default:
            out << j.dump();
            return;
    }
}

}  // namespace detail

/// Serializes `j` keeping insertion order and printing doubles with 17
/// significant digits. A negative indent gives the compact form.
inline std::string json_text(const Json &j, int indent = 2) {
    std::ostringstream out;
    detail::write_json(out, j, indent, 0);
    return out.str();
}

inline Json complex_pair(Complex c) {
    return Json::array({c.real(), c.imag()});
}

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

template <typename T>
T get_field(const Json &obj, const char *key, const char *what) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError(std::string("config field '") + key + "' missing or not " + what);
    }
}

inline uint64_t get_unsigned(const Json &obj, const char *key) {
    const Json &v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0)) {
        throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

inline StateSpec parse_state(const Json &j) {
    if (!j.is_object()) {
        throw ConfigError("config field 'state' must be an object");
    }
    StateSpec spec;
    std::string type = get_field<std::string>(j, "type", "a string");
    if (!j.contains("dim")) {
        throw ConfigError("state needs a 'dim' field");
    }
    spec.dim = static_cast<size_t>(get_unsigned(j, "dim"));
    if (spec.dim < 2) {
        throw ConfigError("state dimension must be at least 2");
    }
    if (type == "haar") {
        spec.kind = StateSpec::Kind::haar;
        if (!j.contains("seed")) {
            throw ConfigError("haar state needs a 'seed' field");
        }
        spec.seed = get_unsigned(j, "seed");
    } else if (type == "explicit") {
        spec.kind = StateSpec::Kind::explicit_amplitudes;
        if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
            throw ConfigError("explicit state needs an 'amplitudes' array of [re, im] pairs");
        }
        for (const auto &pair : j["amplitudes"]) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
                throw ConfigError("each amplitude must be a [re, im] pair of numbers");
            }
            spec.amplitudes.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        if (spec.amplitudes.size() != spec.dim) {
            throw ConfigError(
                "explicit state declares dim " + std::to_string(spec.dim) + " but lists " +
                std::to_string(spec.amplitudes.size()) + " amplitudes");
        }
    } else {
        throw ConfigError("unknown state type '" + type + "' (expected 'explicit' or 'haar')");
    }
    return spec;
}

}  // namespace detail

/// Parses a config document. Command-specific checks happen in validate().
inline RunConfig parse_config(const Json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    RunConfig cfg;
    if (!j.contains("state")) {
        throw ConfigError("config needs a 'state' field");
    }
    cfg.state = detail::parse_state(j["state"]);

    bool has_theta = j.contains("theta");
    bool has_grid = j.contains("theta_grid");
    if (has_theta == has_grid) {
        throw ConfigError("config needs exactly one of 'theta' and 'theta_grid'");
    }
    if (has_theta) {
        if (!j["theta"].is_number()) {
            throw ConfigError("'theta' must be a number");
        }
        cfg.theta = j["theta"].get<double>();
    } else if (j["theta_grid"].is_string()) {
        if (j["theta_grid"].get<std::string>() != "default") {
            throw ConfigError("'theta_grid' must be a list of numbers or \"default\"");
        }
        cfg.default_grid = true;
        cfg.theta_grid = default_theta_grid();
    } else {
        if (!j["theta_grid"].is_array() || j["theta_grid"].empty()) {
            throw ConfigError("'theta_grid' must be a non-empty list of numbers or \"default\"");
        }
        std::vector<double> grid;
        for (const auto &v : j["theta_grid"]) {
            if (!v.is_number()) {
                throw ConfigError("'theta_grid' entries must be numbers");
            }
            grid.push_back(v.get<double>());
        }
        cfg.theta_grid = std::move(grid);
    }

    if (j.contains("modes")) {
        if (!j["modes"].is_array() || j["modes"].empty()) {
            throw ConfigError("'modes' must be a non-empty list");
        }
        for (const auto &m : j["modes"]) {
            if (!m.is_string()) {
                throw ConfigError("'modes' entries must be strings");
            }
            auto mode = parse_mode(m.get<std::string>());
            if (!mode.has_value()) {
                throw ConfigError("unknown reconstruction mode '" + m.get<std::string>() + "'");
            }
            cfg.modes.push_back(*mode);
        }
    } else {
        cfg.modes.assign(kAllModes.begin(), kAllModes.end());
    }

    if (j.contains("shots_per_setting")) {
        cfg.shots_per_setting = detail::get_unsigned(j, "shots_per_setting");
    }
    if (j.contains("seed")) {
        cfg.seed = detail::get_unsigned(j, "seed");
    }
    if (j.contains("output")) {
        const Json &out = j["output"];
        if (!out.is_object()) {
            throw ConfigError("'output' must be an object");
        }
        if (out.contains("path")) {
            cfg.output_path = detail::get_field<std::string>(out, "path", "a string");
        }
        if (out.contains("format")) {
            std::string f = detail::get_field<std::string>(out, "format", "a string");
            if (f == "csv") {
                cfg.format = OutputFormat::csv;
            } else if (f == "json") {
                cfg.format = OutputFormat::json;
            } else {
                throw ConfigError("output format must be 'csv' or 'json'");
            }
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline std::vector<double> resolved_thetas(const RunConfig &cfg) {
    if (cfg.theta.has_value()) {
        return {*cfg.theta};
    }
    return cfg.theta_grid.value_or(std::vector<double>{});
}

/// Command-specific consistency checks.
inline void validate(const RunConfig &cfg, Command command) {
    bool allow_pi = command == Command::verify || command == Command::sample;
    for (double t : resolved_thetas(cfg)) {
        bool ok = t > 0 && (allow_pi ? t <= std::numbers::pi : t < std::numbers::pi);
        if (!ok) {
            throw ConfigError(
                std::string("theta ") + format_double(t) + " outside " + (allow_pi ? "(0, pi]" : "(0, pi)") +
                " for " + to_string(command));
        }
    }
    if (cfg.shots_per_setting.has_value() && *cfg.shots_per_setting == 0) {
        throw ConfigError("'shots_per_setting' must be at least 1");
    }
    switch (command) {
        case Command::verify:
            if (cfg.shots_per_setting.has_value()) {
                throw ConfigError("verify uses exact probabilities; remove 'shots_per_setting'");
            }
            break;
        case Command::sample:
            if (!cfg.shots_per_setting.has_value()) {
                throw ConfigError("sample needs 'shots_per_setting'");
            }
            break;
        case Command::reconstruct:
        case Command::sweep:
            if (cfg.shots_per_setting.has_value()) {
                for (Mode m : cfg.modes) {
                    if (m == Mode::weak_value) {
                        throw ConfigError("weak_value has no finite-shot simulation; drop it or 'shots_per_setting'");
                    }
                }
            }
            break;
    }
}

inline WaveFunction resolve_state(const StateSpec &spec) {
    try {
        if (spec.kind == StateSpec::Kind::haar) {
            return haar_random_state(spec.dim, spec.seed);
        }
        return make_state(spec.amplitudes, spec.dim);
    } catch (const Error &e) {
        throw ConfigError(std::string("invalid state: ") + e.what());
    }
}

/// The resolved configuration embedded in every output file.
inline Json config_json(const RunConfig &cfg, Command command) {
    Json j;
    j["command"] = to_string(command);
    Json state;
    if (cfg.state.kind == StateSpec::Kind::haar) {
        state["type"] = "haar";
        state["dim"] = cfg.state.dim;
        state["seed"] = cfg.state.seed;
    } else {
        state["type"] = "explicit";
        state["dim"] = cfg.state.dim;
        Json amps = Json::array();
        for (const auto &c : cfg.state.amplitudes) {
            amps.push_back(complex_pair(c));
        }
        state["amplitudes"] = amps;
    }
    j["state"] = state;
    if (cfg.theta.has_value()) {
        j["theta"] = *cfg.theta;
    } else {
        j["theta_grid"] = *cfg.theta_grid;
        j["theta_grid_default"] = cfg.default_grid;
    }
    Json modes = Json::array();
    for (Mode m : cfg.modes) {
        modes.push_back(to_string(m));
    }
    j["modes"] = modes;
    j["shots_per_setting"] = cfg.shots_per_setting.has_value() ? Json(*cfg.shots_per_setting) : Json(nullptr);
    j["seed"] = cfg.seed;
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    return j;
}

struct CommandOutput {
    int exit_code = kExitOk;
    std::string content;
};

namespace detail {

inline std::string csv_preamble(const RunConfig &cfg, Command command) {
    return "# dirwf " + std::string(to_string(command)) + "\n# config: " + json_text(config_json(cfg, command), -1) +
           "\n";
}

inline Json json_document(const RunConfig &cfg, Command command) {
    Json doc;
    doc["config"] = config_json(cfg, command);
    return doc;
}

inline std::string finish_json(const Json &doc) {
    return json_text(doc) + "\n";
}

inline std::string opt_double(const std::optional<double> &v) {
    return v.has_value() ? format_double(*v) : "";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

/// Identity audit at every configured theta. Exit 1 if any check fails.
inline CommandOutput run_verify(const RunConfig &cfg) {
    validate(cfg, Command::verify);
    WaveFunction psi = resolve_state(cfg.state);
    std::vector<IdentityAudit> audits;
    for (double t : resolved_thetas(cfg)) {
        audits.push_back(verify_identities(psi, t));
    }
    bool all_passed = true;
    for (const auto &a : audits) {
        all_passed = all_passed && a.passed();
    }

    auto status = [](double dev) { return dev <= kIdentityTol ? "pass" : "fail"; };
    CommandOutput out;
    out.exit_code = all_passed ? kExitOk : kExitFailure;
    if (cfg.format == OutputFormat::csv) {
        std::string s = detail::csv_preamble(cfg, Command::verify);
        s += "theta,check,max_deviation,status\n";
        for (const auto &a : audits) {
            std::string t = format_double(a.theta);
            s += t + ",norm_identity," + format_double(a.norm_identity_dev) + "," + status(a.norm_identity_dev) + "\n";
            s += t + ",joint_sums," + format_double(a.joint_sum_dev) + "," + status(a.joint_sum_dev) + "\n";
            s += t + ",conditional_sums," + format_double(a.conditional_sum_dev) + "," +
                 status(a.conditional_sum_dev) + "\n";
            if (a.weak_sum_dev.has_value()) {
                s += t + ",weak_value_sum," + format_double(*a.weak_sum_dev) + "," + status(*a.weak_sum_dev) + "\n";
            } else {
                s += t + ",weak_value_sum,,skipped\n";
            }
        }
        out.content = s;
    } else {
        Json doc = detail::json_document(cfg, Command::verify);
        Json list = Json::array();
        for (const auto &a : audits) {
            Json r;
            r["theta"] = a.theta;
            r["norm_identity"] = {{"max_deviation", a.norm_identity_dev}, {"status", status(a.norm_identity_dev)}};
            r["joint_sums"] = {{"max_deviation", a.joint_sum_dev}, {"status", status(a.joint_sum_dev)}};
            r["conditional_sums"] = {
                {"max_deviation", a.conditional_sum_dev},
                {"status", status(a.conditional_sum_dev)},
                {"positions_skipped", a.conditional_skipped}};
            if (a.weak_sum_dev.has_value()) {
                r["weak_value_sum"] = {{"max_deviation", *a.weak_sum_dev}, {"status", status(*a.weak_sum_dev)}};
            } else {
                r["weak_value_sum"] = {{"max_deviation", nullptr}, {"status", "skipped"}};
            }
            r["passed"] = a.passed();
            list.push_back(r);
        }
        doc["audits"] = list;
        doc["passed"] = all_passed;
        out.content = detail::finish_json(doc);
    }
    return out;
}

namespace detail {

struct ReconstructionEntry {
    std::optional<double> theta;
    std::string source;
    ReconstructionReport report;
};

}  // namespace detail

/// Reconstructs the configured state in every mode and theta. With
/// `shots_per_setting` the strong modes use sampled statistics.
inline CommandOutput run_reconstruct(const RunConfig &cfg) {
    validate(cfg, Command::reconstruct);
    WaveFunction psi = resolve_state(cfg.state);
    std::vector<double> thetas = resolved_thetas(cfg);

    std::vector<detail::ReconstructionEntry> entries;
    for (Mode mode : cfg.modes) {
        if (mode == Mode::weak_value) {
            entries.push_back({std::nullopt, "exact", weak_reconstruct(psi)});
            continue;
        }
        for (size_t k = 0; k < thetas.size(); k++) {
            double t = thetas[k];
            if (!cfg.shots_per_setting.has_value()) {
                entries.push_back({t, "exact", reconstruct_exact(psi, t, mode)});
                continue;
            }
            auto empirical = run_experiment(psi, t, *cfg.shots_per_setting, substream_seed(cfg.seed, k));
            auto probs = mode == Mode::strong_joint ? success_rate_scaled_joint(empirical) : frequencies_of(empirical);
            entries.push_back({t, "sampled", strong_reconstruct(probs, t, mode, &psi)});
        }
    }

    CommandOutput out;
    if (cfg.format == OutputFormat::csv) {
        std::string s = detail::csv_preamble(cfg, Command::reconstruct);
        s += "theta,mode,source,fidelity,aligned_l2,x,truth_re,truth_im,raw_re,raw_im,estimate_re,estimate_im\n";
        for (const auto &e : entries) {
            const auto &r = e.report;
            for (size_t x = 0; x < psi.dim(); x++) {
                s += detail::opt_double(e.theta) + "," + to_string(r.mode) + "," + e.source + "," +
                     format_double(r.metrics_vs_truth->fidelity) + "," + format_double(r.metrics_vs_truth->aligned_l2) +
                     "," + std::to_string(x) + "," + format_double(psi[x].real()) + "," +
                     format_double(psi[x].imag()) + "," + format_double(r.raw_amplitudes[x].real()) + "," +
                     format_double(r.raw_amplitudes[x].imag()) + "," + format_double(r.estimate[x].real()) + "," +
                     format_double(r.estimate[x].imag()) + "\n";
            }
        }
        out.content = s;
    } else {
        Json doc = detail::json_document(cfg, Command::reconstruct);
        Json truth = Json::array();
        for (const auto &c : psi.amplitudes()) {
            truth.push_back(complex_pair(c));
        }
        doc["truth"] = truth;
        Json list = Json::array();
        for (const auto &e : entries) {
            const auto &r = e.report;
            Json j;
            j["mode"] = to_string(r.mode);
            j["theta"] = e.theta.has_value() ? Json(*e.theta) : Json(nullptr);
            j["source"] = e.source;
            Json raw = Json::array();
            for (const auto &c : r.raw_amplitudes) {
                raw.push_back(complex_pair(c));
            }
            Json est = Json::array();
            for (const auto &c : r.estimate.amplitudes()) {
                est.push_back(complex_pair(c));
            }
            j["raw_amplitudes"] = raw;
            j["estimate"] = est;
            j["fidelity"] = r.metrics_vs_truth->fidelity;
            j["aligned_l2"] = r.metrics_vs_truth->aligned_l2;
            list.push_back(j);
        }
        doc["reconstructions"] = list;
        out.content = detail::finish_json(doc);
    }
    return out;
}

/// Error-vs-theta sweep per mode plus the fitted log-log exponent of each
/// mode's exact-probability error.
inline CommandOutput run_sweep(const RunConfig &cfg) {
    validate(cfg, Command::sweep);
    WaveFunction psi = resolve_state(cfg.state);
    std::vector<double> thetas = resolved_thetas(cfg);
    bool empirical = cfg.shots_per_setting.has_value();

    struct ModeResult {
        Mode mode;
        std::vector<SweepRecord> records;
        std::optional<double> exponent;
        std::string exponent_status;
    };
    std::vector<ModeResult> results;
    for (Mode mode : cfg.modes) {
        ModeResult r{mode, theta_sweep(psi, thetas, mode, cfg.shots_per_setting, cfg.seed), std::nullopt, ""};
        std::vector<SweepRecord> exact = empirical ? theta_sweep(psi, thetas, mode) : r.records;
        try {
            r.exponent = fit_scaling_exponent(exact);
            r.exponent_status = "ok";
        } catch (const DegenerateFit &) {
            r.exponent_status = "degenerate";
        } catch (const InvalidArgument &) {
            r.exponent_status = "insufficient_records";
        }
        results.push_back(std::move(r));
    }

    CommandOutput out;
    if (cfg.format == OutputFormat::csv) {
        std::string s = detail::csv_preamble(cfg, Command::sweep);
        s += "row,theta,mode,fidelity,aligned_l2,max_norm_spread,exponent";
        if (empirical) {
            s += ",shots,mean_std_err,max_std_err";
        }
        s += "\n";
        std::string empty_tail = empirical ? ",,," : "";
        for (const auto &r : results) {
            for (const auto &rec : r.records) {
                s += "record," + format_double(rec.theta) + "," + to_string(rec.mode) + "," +
                     format_double(rec.fidelity) + "," + format_double(rec.aligned_l2) + "," +
                     format_double(rec.max_norm_spread) + ",";
                if (empirical) {
                    s += "," + std::to_string(*rec.shots) + "," + format_double(*rec.mean_std_err) + "," +
                         format_double(*rec.max_std_err);
                }
                s += "\n";
            }
        }
        for (const auto &r : results) {
            s += std::string("exponent,,") + to_string(r.mode) + ",,,," +
                 (r.exponent.has_value() ? format_double(*r.exponent) : "nan") + empty_tail + "\n";
        }
        out.content = s;
    } else {
        Json doc = detail::json_document(cfg, Command::sweep);
        Json list = Json::array();
        Json exps = Json::object();
        for (const auto &r : results) {
            for (const auto &rec : r.records) {
                Json j;
                j["theta"] = rec.theta;
                j["mode"] = to_string(rec.mode);
                j["fidelity"] = rec.fidelity;
                j["aligned_l2"] = rec.aligned_l2;
                j["max_norm_spread"] = rec.max_norm_spread;
                if (empirical) {
                    j["shots"] = *rec.shots;
                    j["mean_std_err"] = *rec.mean_std_err;
                    j["max_std_err"] = *rec.max_std_err;
                }
                list.push_back(j);
            }
            exps[to_string(r.mode)] = {
                {"exponent", r.exponent.has_value() ? Json(*r.exponent) : Json(nullptr)},
                {"status", r.exponent_status}};
        }
        doc["records"] = list;
        doc["exponents"] = exps;
        out.content = detail::finish_json(doc);
    }
    return out;
}

/// Finite-shot counts for every (theta, x, basis) setting.
inline CommandOutput run_sample(const RunConfig &cfg) {
    validate(cfg, Command::sample);
    WaveFunction psi = resolve_state(cfg.state);
    std::vector<double> thetas = resolved_thetas(cfg);
    std::vector<CountsTable> tables;
    for (size_t k = 0; k < thetas.size(); k++) {
        uint64_t seed = thetas.size() == 1 ? cfg.seed : substream_seed(cfg.seed, k);
        tables.push_back(sample_counts(psi, thetas[k], *cfg.shots_per_setting, seed));
    }

    static constexpr const char *kOutcomeNames[3][2] = {{"plus", "minus"}, {"left", "right"}, {"zero", "one"}};
    CommandOutput out;
    if (cfg.format == OutputFormat::csv) {
        std::string s = detail::csv_preamble(cfg, Command::sample);
        s += "theta,x,basis,shots,successes,n_first,n_second,outcome_first,outcome_second,seed\n";
        for (const auto &table : tables) {
            for (const auto &row : table.rows) {
                auto b = static_cast<size_t>(row.basis);
                s += format_double(table.theta) + "," + std::to_string(row.x) + "," + to_string(row.basis) + "," +
                     std::to_string(row.shots) + "," + std::to_string(row.successes) + "," +
                     std::to_string(row.outcome_counts[0]) + "," + std::to_string(row.outcome_counts[1]) + "," +
                     kOutcomeNames[b][0] + "," + kOutcomeNames[b][1] + "," + std::to_string(row.seed) + "\n";
            }
        }
        out.content = s;
    } else {
        Json doc = detail::json_document(cfg, Command::sample);
        Json list = Json::array();
        for (const auto &table : tables) {
            Json t;
            t["theta"] = table.theta;
            t["seed"] = table.seed;
            Json rows = Json::array();
            for (const auto &row : table.rows) {
                auto b = static_cast<size_t>(row.basis);
                Json r;
                r["x"] = row.x;
                r["basis"] = to_string(row.basis);
                r["shots"] = row.shots;
                r["successes"] = row.successes;
                r["outcomes"] = {{kOutcomeNames[b][0], row.outcome_counts[0]}, {kOutcomeNames[b][1], row.outcome_counts[1]}};
                r["seed"] = row.seed;
                rows.push_back(r);
            }
            t["rows"] = rows;
            list.push_back(t);
        }
        doc["tables"] = list;
        out.content = detail::finish_json(doc);
    }
    return out;
}

inline CommandOutput run_command(Command command, const RunConfig &cfg) {
    switch (command) {
        case Command::verify:
            return run_verify(cfg);
        case Command::reconstruct:
            return run_reconstruct(cfg);
        case Command::sweep:
            return run_sweep(cfg);
        case Command::sample:
            return run_sample(cfg);
    }
    throw ConfigError("unknown command");
}

/// Writes `content` to a sibling temporary file, then renames it into place.
inline void write_atomic(const std::string &path, const std::string &content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error("cannot open '" + tmp.string() + "' for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            throw Error("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, target);
}

/// Runs a command and writes its output to `cfg.output_path` (stdout when
/// empty). Returns the process exit code: 0 success, 1 computation or
/// audit failure, 2 configuration error.
inline int execute(Command command, const RunConfig &cfg, std::ostream &err = std::cerr) {
    try {
        CommandOutput out = run_command(command, cfg);
        if (cfg.output_path.empty()) {
            std::cout << out.content;
        } else {
            write_atomic(cfg.output_path, out.content);
        }
        return out.exit_code;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace dirwf::cli

#endif  // DIRWF_CLI_H
