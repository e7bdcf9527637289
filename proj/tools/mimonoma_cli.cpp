// SPDX-License-Identifier: Apache-2.0
// Command-line front end: run one scenario, sweep an axis, or emit
// long-format plot data.

#include "mimonoma/harness.hpp"
#include "mimonoma/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace mimonoma;

namespace {

// Flag values; unset optionals leave the scenario file (or defaults) alone.
struct Overrides {
    std::string config_path;
    std::optional<double> inter_site_m, bandwidth_hz, per_antenna_dbm, p_tol_dbm, alpha, noise_dbm_hz, head_radius_m,
        rho, rho_threshold;
    std::optional<int> n_tx, cluster_size, n_users, trials, threads;
    std::optional<std::uint64_t> seed;
    std::vector<double> edge_coverage_m, beta, power_overrides_dbm;
    std::vector<std::string> modes;
    std::optional<std::string> clustering;
};

void add_scenario_flags(CLI::App& app, Overrides& o) {
    app.add_option("--config", o.config_path, "JSON scenario file")->check(CLI::ExistingFile);
    app.add_option("--inter-site-m", o.inter_site_m, "inter-site distance (m)");
    app.add_option("--bandwidth-hz", o.bandwidth_hz, "system bandwidth (Hz)");
    app.add_option("--n-tx", o.n_tx, "BS transmit antennas");
    app.add_option("--cluster-size", o.cluster_size, "users per NOMA cluster");
    app.add_option("--n-users", o.n_users, "receive antennas in the cell (0: n_tx * cluster_size)");
    app.add_option("--per-antenna-dbm", o.per_antenna_dbm, "per-antenna power budget (dBm)");
    app.add_option("--p-tol-dbm", o.p_tol_dbm, "SIC power separation threshold (dBm)");
    app.add_option("--alpha", o.alpha, "path-loss exponent");
    app.add_option("--noise-dbm-hz", o.noise_dbm_hz, "noise density (dBm/Hz)");
    app.add_option("--head-radius-m", o.head_radius_m, "cluster-head placement radius (m)");
    app.add_option("--edge-coverage-m", o.edge_coverage_m, "cell-edge coverage distance(s) (m)")->delimiter(',');
    app.add_option("--rho", o.rho, "head/member fading correlation");
    app.add_option("--rho-threshold", o.rho_threshold, "correlation threshold for correlated pairing");
    app.add_option("--beta", o.beta, "OMA bandwidth fraction per member rank")->delimiter(',');
    app.add_option("--trials", o.trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--modes", o.modes, "proposed,conventional,oma")->delimiter(',');
    app.add_option("--power-overrides-dbm", o.power_overrides_dbm, "per-beam budgets in beam order (dBm)")->delimiter(',');
    app.add_option("--clustering", o.clustering, "alg1 | alg2")->check(CLI::IsMember({"alg1", "alg2"}));
    app.add_option("--threads", o.threads, "worker threads (0: all cores)");
}

io::ScenarioFile build_scenario(const Overrides& o) {
    io::ScenarioFile s = o.config_path.empty() ? io::ScenarioFile{} : io::load_scenario(o.config_path);
    ScenarioConfig& c = s.config;
    auto set = [](auto& dst, const auto& src) {
        if (src) dst = *src;
    };
    set(c.inter_site_m, o.inter_site_m);
    set(c.bandwidth_hz, o.bandwidth_hz);
    set(c.per_antenna_dbm, o.per_antenna_dbm);
    set(c.p_tol_dbm, o.p_tol_dbm);
    set(c.alpha, o.alpha);
    set(c.noise_dbm_hz, o.noise_dbm_hz);
    set(c.head_radius_m, o.head_radius_m);
    set(c.rho, o.rho);
    set(c.rho_threshold, o.rho_threshold);
    set(c.n_tx, o.n_tx);
    set(c.cluster_size, o.cluster_size);
    set(c.n_users, o.n_users);
    set(c.trials, o.trials);
    set(c.threads, o.threads);
    set(c.master_seed, o.seed);
    if (!o.edge_coverage_m.empty()) c.edge_coverage_m = o.edge_coverage_m;
    if (!o.beta.empty()) c.beta_per_rank = o.beta;
    if (!o.power_overrides_dbm.empty()) c.power_overrides_dbm = o.power_overrides_dbm;
    if (!o.modes.empty()) {
        c.modes.clear();
        for (const auto& m : o.modes) c.modes.push_back(mode_from_string(m));
    }
    if (o.clustering) c.clustering = clustering_from_string(*o.clustering);
    return s;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        io::write_file(out, text);
        std::fprintf(stderr, "wrote %s\n", out.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIMO-NOMA downlink Monte-Carlo simulator"};
    app.require_subcommand(1);

    Overrides o;
    std::string out;
    std::string format = "csv";
    std::string axis;
    std::vector<double> values;

    auto* run = app.add_subcommand("run", "evaluate one scenario point");
    auto* sweep = app.add_subcommand("sweep", "sweep one axis");
    auto* plot = app.add_subcommand("plotdata", "sweep one axis and write long-format plot data");
    for (auto* sub : {run, sweep, plot}) {
        add_scenario_flags(*sub, o);
        sub->add_option("--out", out, "output file (default: stdout)");
    }
    for (auto* sub : {run, sweep})
        sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    for (auto* sub : {sweep, plot}) {
        sub->add_option("--axis", axis, "edge_coverage_m | rho | beta | cluster_size | n_tx");
        sub->add_option("--values", values, "comma-separated axis values")->delimiter(',');
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const io::ScenarioFile s = build_scenario(o);
        const ScenarioConfig& cfg = s.config;
        cfg.validate();
        SweepResult result;
        if (run->parsed()) {
            result.axis = SweepAxis::edge_coverage_m;
            result.config = cfg;
            ScenarioConfig point = cfg;
            point.edge_coverage_m = {cfg.edge_coverage()};
            result.points.push_back(run_point(point, cfg.edge_coverage()));
        } else {
            io::SweepSpec spec = s.sweep.value_or(io::SweepSpec{SweepAxis::edge_coverage_m, cfg.edge_coverage_m});
            if (!axis.empty()) {
                spec.axis = axis_from_string(axis);
                if (values.empty() && spec.axis != SweepAxis::edge_coverage_m)
                    throw ConfigError("--axis " + axis + " needs --values");
                spec.values = values.empty() ? cfg.edge_coverage_m : values;
            } else if (!values.empty()) {
                spec.values = values;
            }
            for (double v : spec.values) apply_axis(cfg, spec.axis, v).validate();
            result = run_sweep(cfg, spec.axis, spec.values);
        }
        const io::Format f = plot->parsed() ? io::Format::plotdata : io::format_from_string(format);
        emit(io::render(result, f), out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
