// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/harness.hpp"
#include "mimonoma/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mimonoma::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "sweep_axis,value,mode,mean_se_bps_hz,p10,p50,p90,feasible_frac,trials";

inline Json to_json(const ScenarioConfig& c) {
    Json j;
    j["inter_site_m"] = c.inter_site_m;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["n_tx"] = c.n_tx;
    j["cluster_size"] = c.cluster_size;
    j["n_users"] = c.n_users;
    j["per_antenna_dbm"] = c.per_antenna_dbm;
    j["p_tol_dbm"] = c.p_tol_dbm;
    j["alpha"] = c.alpha;
    j["noise_dbm_hz"] = c.noise_dbm_hz;
    j["head_radius_m"] = c.head_radius_m;
    j["edge_coverage_m"] = c.edge_coverage_m;
    j["rho"] = c.rho;
    j["rho_threshold"] = c.rho_threshold;
    j["beta_per_rank"] = c.beta_per_rank;
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    Json modes = Json::array();
    for (Mode m : c.modes) modes.push_back(std::string(to_string(m)));
    j["modes"] = modes;
    j["power_overrides_dbm"] = c.power_overrides_dbm;
    j["clustering"] = std::string(to_string(c.clustering));
    return j;
}

// Missing keys keep their defaults; unknown keys are rejected so typos surface.
inline ScenarioConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    ScenarioConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const Json& v = it.value();
        try {
            if (k == "inter_site_m") c.inter_site_m = v.get<double>();
            else if (k == "bandwidth_hz") c.bandwidth_hz = v.get<double>();
            else if (k == "n_tx") c.n_tx = v.get<int>();
            else if (k == "cluster_size") c.cluster_size = v.get<int>();
            else if (k == "n_users") c.n_users = v.get<int>();
            else if (k == "per_antenna_dbm") c.per_antenna_dbm = v.get<double>();
            else if (k == "p_tol_dbm") c.p_tol_dbm = v.get<double>();
            else if (k == "alpha") c.alpha = v.get<double>();
            else if (k == "noise_dbm_hz") c.noise_dbm_hz = v.get<double>();
            else if (k == "head_radius_m") c.head_radius_m = v.get<double>();
            else if (k == "edge_coverage_m") c.edge_coverage_m = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
            else if (k == "rho") c.rho = v.get<double>();
            else if (k == "rho_threshold") c.rho_threshold = v.get<double>();
            else if (k == "beta_per_rank") c.beta_per_rank = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
            else if (k == "trials") c.trials = v.get<int>();
            else if (k == "master_seed") c.master_seed = v.get<std::uint64_t>();
            else if (k == "modes") {
                c.modes.clear();
                for (const auto& m : v) c.modes.push_back(mode_from_string(m.get<std::string>()));
            } else if (k == "power_overrides_dbm") c.power_overrides_dbm = v.get<std::vector<double>>();
            else if (k == "clustering") c.clustering = clustering_from_string(v.get<std::string>());
            else if (k == "threads") c.threads = v.get<int>();
            else throw ConfigError("unknown key '" + k + "'");
        } catch (const Json::exception& e) {
            throw ConfigError("bad value for '" + k + "': " + e.what());
        }
    }
    return c;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::edge_coverage_m;
    std::vector<double> values;
};

// A scenario file: config keys plus an optional "sweep": {"axis", "values"}.
struct ScenarioFile {
    ScenarioConfig config;
    std::optional<SweepSpec> sweep;
};

inline ScenarioFile scenario_from_json(Json j) {
    ScenarioFile out;
    if (j.is_object() && j.contains("sweep")) {
        const Json s = j["sweep"];
        j.erase("sweep");
        try {
            out.sweep = SweepSpec{axis_from_string(s.at("axis").get<std::string>()), s.at("values").get<std::vector<double>>()};
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("bad sweep block: ") + e.what());
        }
    }
    out.config = config_from_json(j);
    return out;
}

inline ScenarioFile load_scenario(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return scenario_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline ScenarioConfig load_config(const std::string& path) { return load_scenario(path).config; }

// FNV-1a over the canonical JSON dump; threads are excluded since they do
// not affect results.
inline std::string config_hash(const ScenarioConfig& c) {
    const std::string s = to_json(c).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_csv(const SweepResult& r) {
    std::string out = kCsvHeader;
    out += '\n';
    const std::string axis(to_string(r.axis));
    for (const auto& p : r.points)
        for (const auto& s : p.stats) {
            out += axis + ',' + format_number(p.value) + ',' + std::string(to_string(s.mode)) + ',' +
                   format_number(s.mean_se) + ',' + format_number(s.p10) + ',' + format_number(s.p50) + ',' +
                   format_number(s.p90) + ',' + format_number(s.feasible_frac) + ',' + std::to_string(s.trials) + '\n';
        }
    return out;
}

struct CsvRow {
    std::string sweep_axis;
    double value = 0.0;
    Mode mode = Mode::proposed;
    double mean_se = 0.0;
    double p10 = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double feasible_frac = 0.0;
    int trials = 0;
};

inline std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("parse_csv: unexpected header");
    std::vector<CsvRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw ConfigError("parse_csv: line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
        auto num = [](const std::string& s) { return s == "nan" ? std::nan("") : std::stod(s); };
        rows.push_back({f[0], num(f[1]), mode_from_string(f[2]), num(f[3]), num(f[4]), num(f[5]), num(f[6]), num(f[7]),
                        std::stoi(f[8])});
    }
    return rows;
}

inline Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

inline Json to_json(const SweepResult& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["config_hash"] = config_hash(r.config);
    j["master_seed"] = r.config.master_seed;
    j["sweep_axis"] = std::string(to_string(r.axis));
    j["config"] = to_json(r.config);
    Json pts = Json::array();
    for (const auto& p : r.points) {
        Json jp;
        jp["value"] = p.value;
        Json modes = Json::array();
        for (const auto& s : p.stats) {
            Json js;
            js["mode"] = std::string(to_string(s.mode));
            js["mean_se_bps_hz"] = number_or_null(s.mean_se);
            js["p10"] = number_or_null(s.p10);
            js["p50"] = number_or_null(s.p50);
            js["p90"] = number_or_null(s.p90);
            js["feasible_frac"] = s.feasible_frac;
            js["feasible_trials"] = s.feasible_trials;
            js["trials"] = s.trials;
            modes.push_back(std::move(js));
        }
        jp["modes"] = std::move(modes);
        pts.push_back(std::move(jp));
    }
    j["points"] = std::move(pts);
    return j;
}

// Long format for plotting: one row per (x, mode, statistic).
inline std::string to_plotdata(const SweepResult& r) {
    std::string out = "axis,x,mode,statistic,y\n";
    const std::string axis(to_string(r.axis));
    for (const auto& p : r.points)
        for (const auto& s : p.stats) {
            const std::string prefix = axis + ',' + format_number(p.value) + ',' + std::string(to_string(s.mode)) + ',';
            const std::pair<const char*, double> stats[] = {{"mean_se_bps_hz", s.mean_se}, {"p10", s.p10}, {"p50", s.p50},
                                                            {"p90", s.p90},                {"feasible_frac", s.feasible_frac}};
            for (const auto& [name, y] : stats) out += prefix + name + ',' + format_number(y) + '\n';
        }
    return out;
}

enum class Format { csv, json, plotdata };

inline Format format_from_string(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "plotdata") return Format::plotdata;
    throw ConfigError("unknown export format '" + std::string(s) + "'");
}

inline std::string render(const SweepResult& r, Format f) {
    switch (f) {
        case Format::csv: return to_csv(r);
        case Format::json: return to_json(r).dump(2) + '\n';
        case Format::plotdata: return to_plotdata(r);
    }
    return {};
}

inline void export_result(const SweepResult& r, Format f, const std::string& path) { write_file(path, render(r, f)); }

}  // namespace mimonoma::io
