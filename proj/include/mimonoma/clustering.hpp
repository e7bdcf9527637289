// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/channel.hpp"
#include "mimonoma/types.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mimonoma {

struct ClusterAssignment {
    // Each cluster is ordered by descending scalar gain; index 0 is the head.
    std::vector<std::vector<UserId>> clusters;
    // Users left without a NOMA partner (served alone on their own beam).
    std::vector<UserId> singletons;

    // Beam order used downstream: clusters first, then singletons.
    std::vector<std::vector<UserId>> beams() const {
        auto out = clusters;
        for (UserId u : singletons) out.push_back({u});
        return out;
    }

    bool operator==(const ClusterAssignment&) const = default;
};

struct FeasibilityMatrix {
    std::vector<std::vector<char>> can_pair;

    static FeasibilityMatrix all(int users, bool value = true) {
        return {std::vector<std::vector<char>>(static_cast<std::size_t>(users),
                                               std::vector<char>(static_cast<std::size_t>(users), value))};
    }
    bool operator()(UserId head, UserId member) const {
        return can_pair[static_cast<std::size_t>(head)][static_cast<std::size_t>(member)] != 0;
    }
    void set(UserId a, UserId b, bool v) {
        can_pair[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
        can_pair[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
    }
};

// Correlation-aware matching is enabled only when a matrix is supplied.
struct CorrelationPreference {
    const RMatrix* correlation = nullptr;
    double threshold = 0.5;

    bool enabled() const { return correlation != nullptr; }
    double operator()(UserId a, UserId b) const { return (*correlation)(a, b); }
};

// Descending gain, ties by ascending user id.
inline std::vector<UserId> sort_users(const std::vector<ScalarGain>& gains) {
    std::vector<ScalarGain> sorted = gains;
    std::stable_sort(sorted.begin(), sorted.end(), [](const ScalarGain& a, const ScalarGain& b) {
        if (a.gain != b.gain) return a.gain > b.gain;
        return a.user_id < b.user_id;
    });
    std::vector<UserId> out;
    out.reserve(sorted.size());
    for (const auto& g : sorted) out.push_back(g.user_id);
    return out;
}

namespace detail {

inline bool shares_ue(const std::vector<UserId>& cluster, UserId candidate, const std::vector<int>& ue_ids) {
    const int ue = ue_ids.at(static_cast<std::size_t>(candidate));
    return std::any_of(cluster.begin(), cluster.end(),
                       [&](UserId u) { return ue_ids.at(static_cast<std::size_t>(u)) == ue; });
}

// True when `member` is the unique best-correlated candidate in `pool` for
// `head` and its correlation reaches the threshold.
inline bool strongest_correlated(UserId head, UserId member, const std::set<UserId>& pool,
                                 const CorrelationPreference& corr) {
    const double r = corr(head, member);
    if (r < corr.threshold) return false;
    return std::all_of(pool.begin(), pool.end(), [&](UserId other) { return other == member || r > corr(head, other); });
}

inline void check_ue_ids(const std::vector<int>& ue_ids, std::size_t users) {
    if (ue_ids.size() < users) throw ConfigError("clustering: ue_ids shorter than the user list");
}

}  // namespace detail

// Fixed N clusters of equal size K. Heads are the N strongest users; every
// further tier of N users is matched to clusters first by correlation with
// the head (when enabled), then in rank order, never placing two antennas of
// the same UE in one cluster.
inline ClusterAssignment cluster_algorithm1(const std::vector<ScalarGain>& gains, const std::vector<int>& ue_ids, int N,
                                            int K, const CorrelationPreference& corr = {}) {
    if (N < 1 || K < 1) throw ConfigError("cluster_algorithm1: N and K must be >= 1");
    const auto order = sort_users(gains);
    const int L = static_cast<int>(order.size());
    if (L != N * K) throw ConfigError("cluster_algorithm1: L must equal N*K");
    detail::check_ue_ids(ue_ids, order.size());

    ClusterAssignment out;
    out.clusters.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) out.clusters[static_cast<std::size_t>(n)].push_back(order[static_cast<std::size_t>(n)]);

    for (int k = 2; k <= K; ++k) {
        std::set<int> open_clusters;
        std::set<UserId> tier;
        for (int n = 0; n < N; ++n) open_clusters.insert(n);
        for (int r = (k - 1) * N; r < k * N; ++r) tier.insert(order[static_cast<std::size_t>(r)]);
        // tier users are visited in rank order, not id order
        std::vector<UserId> tier_ranked(order.begin() + (k - 1) * N, order.begin() + k * N);

        auto place = [&](int n, UserId u) {
            out.clusters[static_cast<std::size_t>(n)].push_back(u);
            open_clusters.erase(n);
            tier.erase(u);
        };

        if (corr.enabled()) {
            for (int n = 0; n < N; ++n) {
                const UserId head = out.clusters[static_cast<std::size_t>(n)].front();
                for (UserId u : tier_ranked) {
                    if (!open_clusters.count(n) || !tier.count(u)) continue;
                    if (detail::strongest_correlated(head, u, tier, corr) &&
                        !detail::shares_ue(out.clusters[static_cast<std::size_t>(n)], u, ue_ids))
                        place(n, u);
                }
            }
        }
        for (int n = 0; n < N; ++n) {
            for (UserId u : tier_ranked) {
                if (!open_clusters.count(n) || !tier.count(u)) continue;
                if (!detail::shares_ue(out.clusters[static_cast<std::size_t>(n)], u, ue_ids)) place(n, u);
            }
        }
        if (!open_clusters.empty())
            throw ClusteringError("cluster_algorithm1: UE rule leaves tier " + std::to_string(k) + " unassignable");
    }

    // members join in tier order, which is already descending gain
    return out;
}

// Number of initial clusters for 2-user clustering with n_tx beams: one per
// antenna when every antenna can carry a pair, otherwise ceil(L/2).
inline int initial_cluster_count(int L, int n_tx) {
    if (L > n_tx && L <= 2 * n_tx) return n_tx;
    return (L + 1) / 2;
}

// 2-user clustering. Correlated pairs are formed first; the remaining heads
// and members are paired by a descending two-pointer scan (weakest eligible
// head with weakest eligible member). A head that cannot pair with the
// current member is deferred and retried against members still unpaired
// once the scan ends. Whatever stays unpaired becomes a singleton.
inline ClusterAssignment cluster_algorithm2(const std::vector<ScalarGain>& gains, const std::vector<int>& ue_ids,
                                            int n_tx, const FeasibilityMatrix& feasible,
                                            const CorrelationPreference& corr = {}) {
    const auto order = sort_users(gains);
    const int L = static_cast<int>(order.size());
    if (L < 1) throw ConfigError("cluster_algorithm2: no users");
    if (n_tx < 1) throw ConfigError("cluster_algorithm2: n_tx must be >= 1");
    detail::check_ue_ids(ue_ids, order.size());
    const int N = initial_cluster_count(L, n_tx);

    auto user_at = [&](int rank) { return order[static_cast<std::size_t>(rank)]; };
    auto same_ue = [&](UserId a, UserId b) {
        return ue_ids[static_cast<std::size_t>(a)] == ue_ids[static_cast<std::size_t>(b)];
    };

    std::set<int> heads;    // ranks 0 .. N-1 still available
    std::set<int> members;  // ranks N .. L-1 still available
    for (int r = 0; r < N; ++r) heads.insert(r);
    for (int r = N; r < L; ++r) members.insert(r);

    std::vector<std::vector<UserId>> correlated_pairs;
    if (corr.enabled()) {
        for (int i = 0; i < N; ++i) {
            for (int j = N; j < L; ++j) {
                if (!heads.count(i) || !members.count(j)) continue;
                std::set<UserId> pool;
                for (int r : members) pool.insert(user_at(r));
                const UserId h = user_at(i);
                const UserId m = user_at(j);
                if (detail::strongest_correlated(h, m, pool, corr) && feasible(h, m) && !same_ue(h, m)) {
                    correlated_pairs.push_back({h, m});
                    heads.erase(i);
                    members.erase(j);
                }
            }
        }
    }

    std::vector<std::pair<int, int>> scan_pairs;  // (head rank, member rank), in formation order
    std::vector<int> deferred;
    int i = N - 1;
    int j = L - 1;
    while (j >= N && i >= 0) {
        if (!heads.count(i)) {
            --i;
            continue;
        }
        if (!members.count(j)) {
            --j;
            continue;
        }
        const UserId h = user_at(i);
        const UserId m = user_at(j);
        if (feasible(h, m) && !same_ue(h, m)) {
            scan_pairs.emplace_back(i, j);
            heads.erase(i);
            members.erase(j);
            --i;
            --j;
        } else {
            deferred.push_back(i);
            heads.erase(i);
            --i;
        }
    }
    // deferred heads get a second chance with members the scan never reached
    for (int jr = L - 1; jr >= N; --jr) {
        if (!members.count(jr)) continue;
        for (auto it = deferred.begin(); it != deferred.end(); ++it) {
            const UserId h = user_at(*it);
            const UserId m = user_at(jr);
            if (feasible(h, m) && !same_ue(h, m)) {
                scan_pairs.emplace_back(*it, jr);
                members.erase(jr);
                deferred.erase(it);
                break;
            }
        }
    }

    ClusterAssignment out;
    out.clusters = std::move(correlated_pairs);
    for (auto it = scan_pairs.rbegin(); it != scan_pairs.rend(); ++it)
        out.clusters.push_back({user_at(it->first), user_at(it->second)});

    std::vector<int> leftover(heads.begin(), heads.end());
    leftover.insert(leftover.end(), deferred.begin(), deferred.end());
    leftover.insert(leftover.end(), members.begin(), members.end());
    std::sort(leftover.begin(), leftover.end());
    for (int r : leftover) out.singletons.push_back(user_at(r));
    return out;
}

using PairFeasibilityHook = std::function<bool(UserId head, UserId member)>;

// C[i][j] from the hook for every head/member role assignment (head = the
// stronger user), then closed upward: a member that can pair with a head can
// pair with every stronger head as well.
inline FeasibilityMatrix build_feasibility(const std::vector<ScalarGain>& gains, const PairFeasibilityHook& hook) {
    const auto order = sort_users(gains);
    const int L = static_cast<int>(order.size());
    auto C = FeasibilityMatrix::all(L, false);
    for (int jr = 1; jr < L; ++jr) {
        bool closed = false;
        for (int ir = jr - 1; ir >= 0; --ir) {
            const UserId head = order[static_cast<std::size_t>(ir)];
            const UserId member = order[static_cast<std::size_t>(jr)];
            closed = closed || hook(head, member);
            C.set(head, member, closed);
        }
    }
    return C;
}

// Property checks shared by tests and the harness.

inline bool is_partition(const ClusterAssignment& a, int users) {
    std::vector<int> seen(static_cast<std::size_t>(users), 0);
    auto mark = [&](UserId u) {
        if (u < 0 || u >= users) return false;
        return ++seen[static_cast<std::size_t>(u)] == 1;
    };
    for (const auto& c : a.clusters)
        for (UserId u : c)
            if (!mark(u)) return false;
    for (UserId u : a.singletons)
        if (!mark(u)) return false;
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

inline bool respects_ue_rule(const ClusterAssignment& a, const std::vector<int>& ue_ids) {
    for (const auto& c : a.clusters) {
        std::set<int> ues;
        for (UserId u : c)
            if (!ues.insert(ue_ids.at(static_cast<std::size_t>(u))).second) return false;
    }
    return true;
}

}  // namespace mimonoma
