// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/types.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace mimonoma {

// Per-rank throughput requirements of one cluster. rate_bps[0] belongs to
// the head and is ignored.
struct RateTargets {
    std::vector<double> rate_bps;
    double bandwidth_hz = 1.0;

    // 2^(R/B)
    double phi(std::size_t rank) const { return std::exp2(rate_bps[rank] / bandwidth_hz); }
    std::size_t size() const { return rate_bps.size(); }

    static RateTargets from_phi(const std::vector<double>& phi, double bandwidth_hz) {
        RateTargets t;
        t.bandwidth_hz = bandwidth_hz;
        for (double p : phi) t.rate_bps.push_back(bandwidth_hz * std::log2(p));
        return t;
    }
};

enum class Binding { head_excess, rate_bound, sic_bound };

inline const char* to_string(Binding b) {
    switch (b) {
        case Binding::head_excess: return "head";
        case Binding::rate_bound: return "rate";
        case Binding::sic_bound: return "sic";
    }
    return "?";
}

struct PowerAllocation {
    double budget_w = 0.0;
    std::vector<double> power_w;
    std::vector<Binding> binding;
    bool feasible = false;
    double deficit_w = 0.0;  // extra budget needed when infeasible
    double p_tol_w = 0.0;
};

// Beam budgets proportional to beam size relative to the mean size, so
// equal-size beams each get the per-antenna budget. Overrides (watts, in beam
// order) replace the proportional share.
inline std::vector<double> inter_cluster_split(double per_antenna_w, const std::vector<int>& beam_sizes,
                                               const std::vector<double>& overrides_w = {}) {
    if (!(per_antenna_w > 0.0)) throw ConfigError("inter_cluster_split: budget must be positive");
    if (beam_sizes.empty()) return {};
    if (!overrides_w.empty() && overrides_w.size() != beam_sizes.size())
        throw ConfigError("inter_cluster_split: one override per beam required");
    const double mean_size =
        static_cast<double>(std::accumulate(beam_sizes.begin(), beam_sizes.end(), 0)) / static_cast<double>(beam_sizes.size());
    std::vector<double> out;
    out.reserve(beam_sizes.size());
    for (std::size_t n = 0; n < beam_sizes.size(); ++n) {
        if (!overrides_w.empty()) {
            if (!(overrides_w[n] > 0.0)) throw ConfigError("inter_cluster_split: override must be positive");
            out.push_back(overrides_w[n]);
        } else {
            out.push_back(per_antenna_w * beam_sizes[n] / mean_size);
        }
    }
    return out;
}

namespace detail {

inline void check_allocation_inputs(const std::vector<double>& g, double p_n, const RateTargets& targets, double p_tol) {
    if (g.empty()) throw ConfigError("intra_cluster_allocate: empty cluster");
    if (targets.size() != g.size()) throw ConfigError("intra_cluster_allocate: one rate target per user required");
    if (!(p_n > 0.0)) throw ConfigError("intra_cluster_allocate: budget must be positive");
    if (!(p_tol >= 0.0)) throw ConfigError("intra_cluster_allocate: p_tol must be non-negative");
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(g[k]) || !(g[k] > 0.0)) throw OrderingError("intra_cluster_allocate: gains must be positive");
        if (k > 0 && !(g[k] < g[k - 1])) throw OrderingError("intra_cluster_allocate: gains must strictly decrease");
        if (k > 0 && !(targets.phi(k) >= 1.0)) throw ConfigError("intra_cluster_allocate: negative rate target");
    }
}

}  // namespace detail

// Optimal intra-cluster split. Every user below the head gets the least power
// meeting both its rate target and the SIC margin over the stronger users'
// cumulative power; the head takes what is left. Walking down from the full
// budget S_K = p_n, the cumulative power of ranks 1..k-1 is
//   S_{k-1} = min((S_k - (phi_k - 1)/g_k) / phi_k,  (S_k - p_tol/g_{k-1}) / 2)
// where the first term leaves the rate constraint tight and the second the
// SIC constraint; rank k is SIC-bound exactly when the second term is smaller.
inline PowerAllocation intra_cluster_allocate(const std::vector<double>& g, double p_n, const RateTargets& targets,
                                              double p_tol) {
    detail::check_allocation_inputs(g, p_n, targets, p_tol);
    const std::size_t K = g.size();

    PowerAllocation out;
    out.budget_w = p_n;
    out.p_tol_w = p_tol;
    out.power_w.assign(K, 0.0);
    out.binding.assign(K, Binding::head_excess);

    double S = p_n;
    for (std::size_t k = K - 1; k >= 1; --k) {
        const double phi = targets.phi(k);
        const double rate_prev = (S - (phi - 1.0) / g[k]) / phi;
        const double sic_prev = (S - p_tol / g[k - 1]) / 2.0;
        const bool sic = sic_prev < rate_prev;
        const double prev = sic ? sic_prev : rate_prev;
        out.binding[k] = sic ? Binding::sic_bound : Binding::rate_bound;
        out.power_w[k] = S - prev;
        S = prev;
    }
    out.power_w[0] = S;
    out.feasible = S >= 0.0;

    if (!out.feasible) {
        // smallest budget that admits the constraints: push zero head power up
        double need = 0.0;
        for (std::size_t k = 1; k < K; ++k) {
            const double phi = targets.phi(k);
            need = std::max(phi * need + (phi - 1.0) / g[k], 2.0 * need + p_tol / g[k - 1]);
        }
        out.deficit_w = need - p_n;
    }
    return out;
}

inline bool feasibility_check(const std::vector<double>& g, double p_n, const RateTargets& targets, double p_tol) {
    return intra_cluster_allocate(g, p_n, targets, p_tol).feasible;
}

// Sum over ranks of log2(1 + g_k p_k / (g_k sum_{j<k} p_j + 1)), bits/s/Hz.
inline double cluster_spectral_efficiency(const std::vector<double>& g, const std::vector<double>& p) {
    double below = 0.0;
    double se = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        se += std::log2(1.0 + g[k] * p[k] / (g[k] * below + 1.0));
        below += p[k];
    }
    return se;
}

}  // namespace mimonoma
