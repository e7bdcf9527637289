// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/beamforming.hpp"
#include "mimonoma/channel.hpp"
#include "mimonoma/clustering.hpp"
#include "mimonoma/metrics.hpp"
#include "mimonoma/power.hpp"
#include "mimonoma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace mimonoma {

struct ModeOutcome {
    Mode mode = Mode::proposed;
    bool feasible = false;
    double se = std::numeric_limits<double>::quiet_NaN();  // bits/s/Hz, NaN when infeasible
    std::string reason;
    // Per-user leakage ratios under this mode's precoder (empty for OMA).
    std::vector<double> head_leakage;
    std::vector<double> member_leakage;
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    ClusterAssignment assignment;
    std::vector<ModeOutcome> outcomes;

    const ModeOutcome* find(Mode m) const {
        for (const auto& o : outcomes)
            if (o.mode == m) return &o;
        return nullptr;
    }
};

namespace detail {

inline ModeOutcome infeasible(Mode m, std::string reason) {
    ModeOutcome o;
    o.mode = m;
    o.reason = std::move(reason);
    return o;
}

// Nominal pair check used to gate clustering: interference-free gains at the
// per-antenna budget, member target at its own OMA rate.
inline bool nominal_pair_feasible(const ScenarioConfig& cfg, double head_gain, double member_gain) {
    const double noise = cfg.noise_watt();
    const double gh = head_gain / noise;
    const double gm = member_gain / noise;
    if (!(gh > gm) || !(gm > 0.0)) return false;
    const double p_n = cfg.per_antenna_watt();
    RateTargets t;
    t.bandwidth_hz = cfg.bandwidth_hz;
    t.rate_bps = {0.0, oma_rate(gm, cfg.beta_for_rank(2), p_n, cfg.bandwidth_hz)};
    return feasibility_check({gh, gm}, p_n, t, cfg.p_tol_watt());
}

struct BeamGains {
    std::vector<std::vector<double>> g;          // [beam][rank]
    std::vector<std::vector<char>> outage;       // decode weight unavailable
};

inline BeamGains beam_gains(const CMatrix& H, const BeamformingSolution& bf, const std::vector<std::vector<int>>& beams,
                            const std::vector<double>& beam_power, double noise_w, bool use_weights) {
    BeamGains out;
    for (std::size_t n = 0; n < beams.size(); ++n) {
        std::vector<double> g;
        std::vector<char> outage;
        for (std::size_t k = 0; k < beams[n].size(); ++k) {
            const auto& d = bf.decode_weights[n][k];
            const cplx w = use_weights && d ? *d : cplx(1.0, 0.0);
            g.push_back(normalized_gain(H.row(beams[n][k]), w, bf.M, static_cast<Eigen::Index>(n), beam_power, noise_w));
            outage.push_back(use_weights && !d);
        }
        out.g.push_back(std::move(g));
        out.outage.push_back(std::move(outage));
    }
    return out;
}

inline void record_leakage(ModeOutcome& o, const CMatrix& H, const CMatrix& M, const std::vector<std::vector<int>>& beams,
                           const std::vector<double>& beam_power) {
    for (std::size_t n = 0; n < beams.size(); ++n)
        for (std::size_t k = 0; k < beams[n].size(); ++k) {
            const double r = inter_cluster_leakage_ratio(H.row(beams[n][k]), M, static_cast<Eigen::Index>(n), beam_power);
            (k == 0 ? o.head_leakage : o.member_leakage).push_back(r);
        }
}

// NOMA spectral efficiency for one precoder: allocate inside every beam and
// sum the resulting rates.
inline ModeOutcome noma_outcome(Mode mode, const ScenarioConfig& cfg, const CMatrix& H, const BeamformingSolution& bf,
                                const std::vector<std::vector<int>>& beams, const std::vector<double>& beam_power,
                                const std::vector<RateTargets>& targets) {
    const double noise = cfg.noise_watt();
    const double B = cfg.bandwidth_hz;
    const auto gains = beam_gains(H, bf, beams, beam_power, noise, mode == Mode::proposed);
    ModeOutcome o;
    o.mode = mode;
    std::vector<double> rates;
    for (std::size_t n = 0; n < beams.size(); ++n) {
        // users whose decoding weight is singular are in outage and drop out
        std::vector<double> g;
        RateTargets t;
        t.bandwidth_hz = B;
        for (std::size_t k = 0; k < beams[n].size(); ++k) {
            if (gains.outage[n][k]) continue;
            g.push_back(gains.g[n][k]);
            t.rate_bps.push_back(g.size() == 1 ? 0.0 : targets[n].rate_bps[k]);
        }
        if (g.empty()) continue;
        PowerAllocation alloc;
        try {
            alloc = intra_cluster_allocate(g, beam_power[n], t, cfg.p_tol_watt());
        } catch (const OrderingError&) {
            return infeasible(mode, "SIC order of normalized gains differs from cluster order");
        }
        if (!alloc.feasible) return infeasible(mode, "power budget below intra-cluster requirements");
        double stronger = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            rates.push_back(user_rate(g[k], alloc.power_w[k], stronger, B));
            stronger += alloc.power_w[k];
        }
    }
    o.feasible = true;
    o.se = cell_throughput(rates, B).spectral_efficiency;
    record_leakage(o, H, bf.M, beams, beam_power);
    return o;
}

}  // namespace detail

inline ClusterAssignment cluster_users(const ScenarioConfig& cfg, const ChannelRealization& ch) {
    const auto gains = scalar_gains(ch);
    const auto ue = ch.ue_ids();
    RMatrix R;
    CorrelationPreference pref;
    if (cfg.rho > 0.0) {
        R = correlation_matrix(ch.H);
        pref = {&R, cfg.rho_threshold};
    }
    if (cfg.clustering == ClusteringAlgorithm::alg1)
        return cluster_algorithm1(gains, ue, cfg.n_tx, cfg.cluster_size, pref);
    const auto C = build_feasibility(gains, [&](UserId head, UserId member) {
        return detail::nominal_pair_feasible(cfg, gains[static_cast<std::size_t>(head)].gain,
                                             gains[static_cast<std::size_t>(member)].gain);
    });
    return cluster_algorithm2(gains, ue, cfg.n_tx, C, pref);
}

// One realization through clustering, beamforming, rate targets, power
// allocation and metrics for every configured mode. Deterministic in
// (master_seed, trial_index); failures are recorded, never thrown.
inline TrialRecord run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    TrialRecord rec;
    rec.trial_index = trial_index;
    auto fail_all = [&](const std::string& why) {
        for (Mode m : cfg.modes) rec.outcomes.push_back(detail::infeasible(m, why));
        return rec;
    };

    Rng rng = make_trial_rng(cfg.master_seed, trial_index);
    const ChannelRealization ch = realize_channel(cfg, rng, cfg.master_seed);
    try {
        rec.assignment = cluster_users(cfg, ch);
    } catch (const ClusteringError& e) {
        return fail_all(e.what());
    }
    const auto beams = rec.assignment.beams();
    if (static_cast<int>(beams.size()) > cfg.n_tx) return fail_all("more beams than transmit antennas");

    std::vector<int> sizes;
    for (const auto& b : beams) sizes.push_back(static_cast<int>(b.size()));
    std::vector<double> overrides_w;
    for (double dbm : cfg.power_overrides_dbm) overrides_w.push_back(units::dbm_to_watt(dbm));
    if (!overrides_w.empty() && overrides_w.size() != beams.size()) return fail_all("power overrides do not match beam count");
    const auto beam_power = inter_cluster_split(cfg.per_antenna_watt(), sizes, overrides_w);

    const double noise = cfg.noise_watt();
    const double B = cfg.bandwidth_hz;
    auto beta = [&](int rank) { return cfg.beta_for_rank(rank); };

    // The OMA reference shares the equivalent-channel precoder; its per-user
    // rates double as the NOMA throughput requirements.
    std::optional<BeamformingSolution> proposed;
    std::string proposed_error;
    try {
        proposed = proposed_beamforming(ch.H, beams);
    } catch (const std::runtime_error& e) {
        proposed_error = e.what();
    }

    std::vector<RateTargets> targets;
    std::optional<detail::BeamGains> oma_gains;
    if (proposed) {
        oma_gains = detail::beam_gains(ch.H, *proposed, beams, beam_power, noise, false);
        for (std::size_t n = 0; n < beams.size(); ++n)
            targets.push_back(rate_targets_from_oma(oma_gains->g[n], beam_power[n], beta, B));
    }

    for (Mode m : cfg.modes) {
        if (!proposed) {
            rec.outcomes.push_back(detail::infeasible(m, "OMA reference unavailable: " + proposed_error));
            continue;
        }
        if (m == Mode::oma) {
            ModeOutcome o;
            o.mode = m;
            std::vector<double> rates;
            for (std::size_t n = 0; n < beams.size(); ++n) {
                double member_share = 0.0;
                for (std::size_t k = 1; k < beams[n].size(); ++k) {
                    const double b = beta(static_cast<int>(k) + 1);
                    member_share += b;
                    rates.push_back(oma_rate(oma_gains->g[n][k], b, beam_power[n], B));
                }
                rates.push_back(oma_rate(oma_gains->g[n][0], 1.0 - member_share, beam_power[n], B));
            }
            o.feasible = true;
            o.se = cell_throughput(rates, B).spectral_efficiency;
            rec.outcomes.push_back(std::move(o));
        } else if (m == Mode::proposed) {
            rec.outcomes.push_back(detail::noma_outcome(m, cfg, ch.H, *proposed, beams, beam_power, targets));
        } else {
            try {
                const auto conv = conventional_precoder(ch.H, beams);
                rec.outcomes.push_back(detail::noma_outcome(m, cfg, ch.H, conv, beams, beam_power, targets));
            } catch (const SingularPrecoderError& e) {
                rec.outcomes.push_back(detail::infeasible(m, e.what()));
            }
        }
    }
    return rec;
}

// Runs trials [0, cfg.trials) in parallel; slot i always holds trial i.
inline std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.trials));
    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials)));
    auto work = [&](unsigned w) {
        for (std::size_t t = w; t < out.size(); t += workers) out[t] = run_trial(cfg, t);
    };
    if (workers == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
    return out;
}

// Linear interpolation between order statistics; NaN for an empty sample.
inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct ModeStats {
    Mode mode = Mode::proposed;
    double mean_se = std::numeric_limits<double>::quiet_NaN();
    double p10 = std::numeric_limits<double>::quiet_NaN();
    double p50 = std::numeric_limits<double>::quiet_NaN();
    double p90 = std::numeric_limits<double>::quiet_NaN();
    double feasible_frac = 0.0;
    int trials = 0;
    int feasible_trials = 0;
};

inline ModeStats summarize(Mode m, const std::vector<TrialRecord>& records) {
    ModeStats s;
    s.mode = m;
    s.trials = static_cast<int>(records.size());
    std::vector<double> se;
    for (const auto& r : records) {
        const auto* o = r.find(m);
        if (o && o->feasible) se.push_back(o->se);
    }
    s.feasible_trials = static_cast<int>(se.size());
    s.feasible_frac = s.trials ? static_cast<double>(se.size()) / s.trials : 0.0;
    if (!se.empty()) {
        double sum = 0.0;
        for (double v : se) sum += v;
        s.mean_se = sum / static_cast<double>(se.size());
        s.p10 = percentile(se, 0.10);
        s.p50 = percentile(se, 0.50);
        s.p90 = percentile(se, 0.90);
    }
    return s;
}

enum class SweepAxis { edge_coverage_m, rho, beta, cluster_size, n_tx };

inline std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::edge_coverage_m: return "edge_coverage_m";
        case SweepAxis::rho: return "rho";
        case SweepAxis::beta: return "beta";
        case SweepAxis::cluster_size: return "cluster_size";
        case SweepAxis::n_tx: return "n_tx";
    }
    return "?";
}

inline SweepAxis axis_from_string(std::string_view s) {
    for (auto a : {SweepAxis::edge_coverage_m, SweepAxis::rho, SweepAxis::beta, SweepAxis::cluster_size, SweepAxis::n_tx})
        if (to_string(a) == s) return a;
    throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

// Copy of cfg with the axis pinned to `value`. Cluster sizes other than two
// switch 2-user clustering over to the fixed-size algorithm.
inline ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::edge_coverage_m: cfg.edge_coverage_m = {value}; break;
        case SweepAxis::rho: cfg.rho = value; break;
        case SweepAxis::beta: cfg.beta_per_rank = {value}; break;
        case SweepAxis::cluster_size:
            cfg.cluster_size = static_cast<int>(std::lround(value));
            if (cfg.cluster_size != 2) cfg.clustering = ClusteringAlgorithm::alg1;
            break;
        case SweepAxis::n_tx: cfg.n_tx = static_cast<int>(std::lround(value)); break;
    }
    return cfg;
}

struct SweepPoint {
    double value = 0.0;
    std::vector<ModeStats> stats;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::edge_coverage_m;
    ScenarioConfig config;
    std::vector<SweepPoint> points;
};

inline SweepPoint run_point(const ScenarioConfig& cfg, double value) {
    const auto records = run_trials(cfg);
    SweepPoint p;
    p.value = value;
    for (Mode m : cfg.modes) p.stats.push_back(summarize(m, records));
    return p;
}

inline SweepResult run_sweep(const ScenarioConfig& cfg, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("run_sweep: sweep axis has no values");
    SweepResult out;
    out.axis = axis;
    out.config = cfg;
    for (double v : values) out.points.push_back(run_point(apply_axis(cfg, axis, v), v));
    return out;
}

// Sweep over the configured cell-edge coverage list.
inline SweepResult run_sweep(const ScenarioConfig& cfg) {
    return run_sweep(cfg, SweepAxis::edge_coverage_m, cfg.edge_coverage_m);
}

}  // namespace mimonoma
