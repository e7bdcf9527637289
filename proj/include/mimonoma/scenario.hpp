// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/types.hpp"
#include "mimonoma/units.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mimonoma {

enum class Mode { proposed, conventional, oma };
enum class ClusteringAlgorithm { alg1, alg2 };

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::proposed: return "proposed";
        case Mode::conventional: return "conventional";
        case Mode::oma: return "oma";
    }
    return "?";
}

inline Mode mode_from_string(std::string_view s) {
    if (s == "proposed") return Mode::proposed;
    if (s == "conventional") return Mode::conventional;
    if (s == "oma") return Mode::oma;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

inline std::string_view to_string(ClusteringAlgorithm a) { return a == ClusteringAlgorithm::alg1 ? "alg1" : "alg2"; }

inline ClusteringAlgorithm clustering_from_string(std::string_view s) {
    if (s == "alg1") return ClusteringAlgorithm::alg1;
    if (s == "alg2") return ClusteringAlgorithm::alg2;
    throw ConfigError("unknown clustering algorithm '" + std::string(s) + "'");
}

// One downlink scenario. Defaults reproduce the 2-user, 3-antenna setup
// (43 dBm per antenna, 10 dBm SIC threshold, 8.64 MHz, -169 dBm/Hz, d^-4).
struct ScenarioConfig {
    double inter_site_m = 600.0;
    double bandwidth_hz = 8.64e6;
    int n_tx = 3;
    int cluster_size = 2;
    int n_users = 0;  // 0: n_tx * cluster_size
    double per_antenna_dbm = 43.0;
    double p_tol_dbm = 10.0;
    double alpha = 4.0;
    double noise_dbm_hz = -169.0;
    double head_radius_m = 150.0;
    std::vector<double> edge_coverage_m = {150.0};
    double rho = 0.0;
    double rho_threshold = 0.5;
    // Bandwidth fraction used for the OMA rate of within-cluster rank 2, 3, ...
    // A single entry applies to every non-head rank.
    std::vector<double> beta_per_rank = {0.5};
    int trials = 2000;
    std::uint64_t master_seed = 1;
    std::vector<Mode> modes = {Mode::proposed, Mode::conventional, Mode::oma};
    // Per-beam budgets in dBm, in beam order (NOMA clusters, then singletons).
    std::vector<double> power_overrides_dbm;
    ClusteringAlgorithm clustering = ClusteringAlgorithm::alg2;
    int threads = 0;  // 0: hardware concurrency

    int user_count() const { return n_users > 0 ? n_users : n_tx * cluster_size; }

    // Number of users placed near the BS as cluster-head candidates.
    int head_count() const {
        const int users = user_count();
        return users <= n_tx ? users : n_tx;
    }

    double edge_coverage() const { return edge_coverage_m.front(); }

    double beta_for_rank(int rank) const {
        // rank is 1-based within a cluster; rank 1 is the head
        if (beta_per_rank.size() == 1) return beta_per_rank.front();
        return beta_per_rank.at(static_cast<std::size_t>(rank - 2));
    }

    double p_tol_watt() const { return units::dbm_to_watt(p_tol_dbm); }
    double per_antenna_watt() const { return units::dbm_to_watt(per_antenna_dbm); }
    double noise_watt() const { return units::noise_power_watt(noise_dbm_hz, bandwidth_hz); }

    void validate() const {
        if (n_tx < 1) throw ConfigError("n_tx must be >= 1");
        if (cluster_size < 1) throw ConfigError("cluster_size must be >= 1");
        if (user_count() < 1) throw ConfigError("need at least one user");
        if (trials < 1) throw ConfigError("trials must be >= 1");
        if (!(bandwidth_hz > 0)) throw ConfigError("bandwidth must be positive");
        if (!(alpha > 0)) throw ConfigError("path-loss exponent must be positive");
        if (!(inter_site_m > 0)) throw ConfigError("inter-site distance must be positive");
        if (!(head_radius_m > 0)) throw ConfigError("head radius must be positive");
        if (edge_coverage_m.empty()) throw ConfigError("edge_coverage_m must not be empty");
        for (double e : edge_coverage_m) {
            if (!(e > 0) || e > inter_site_m)
                throw ConfigError("cell-edge coverage must lie in (0, inter_site_m]");
            if (head_radius_m >= inter_site_m - e)
                throw ConfigError("head radius must be below the start of the cell-edge band");
        }
        if (rho < 0.0 || rho > 1.0) throw ConfigError("rho must lie in [0, 1]");
        if (beta_per_rank.empty()) throw ConfigError("beta_per_rank must not be empty");
        double beta_sum = 0.0;
        for (int k = 2; k <= cluster_size; ++k) {
            if (beta_per_rank.size() != 1 && beta_per_rank.size() != static_cast<std::size_t>(cluster_size - 1))
                throw ConfigError("beta_per_rank needs 1 or cluster_size-1 entries");
            const double b = beta_for_rank(k);
            if (!(b > 0.0) || b > 1.0) throw ConfigError("beta must lie in (0, 1]");
            beta_sum += b;
        }
        if (beta_sum >= 1.0) throw ConfigError("member bandwidth fractions leave nothing for the cluster-head");
        if (modes.empty()) throw ConfigError("at least one mode is required");
        if (clustering == ClusteringAlgorithm::alg1 && n_users > 0 && n_users != n_tx * cluster_size)
            throw ConfigError("alg1 requires n_users == n_tx * cluster_size");
        if (clustering == ClusteringAlgorithm::alg2 && cluster_size != 2)
            throw ConfigError("alg2 forms 2-user clusters; use alg1 for larger clusters");
        if (clustering == ClusteringAlgorithm::alg2 && user_count() > 2 * n_tx)
            throw ConfigError("more than 2*n_tx users needs more clusters than beams");
    }
};

}  // namespace mimonoma
