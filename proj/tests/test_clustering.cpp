// SPDX-License-Identifier: Apache-2.0
#include "mimonoma/clustering.hpp"
#include "mimonoma/harness.hpp"

#include "oracles/clustering_sweep.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mimonoma;

namespace {

// ids 0..n-1 with gains n..1, so rank order equals id order
std::vector<ScalarGain> descending(int n) {
    std::vector<ScalarGain> g;
    for (int i = 0; i < n; ++i) g.push_back({i, static_cast<double>(n - i)});
    return g;
}

std::vector<int> own_ues(int n) {
    std::vector<int> ue(static_cast<std::size_t>(n));
    std::iota(ue.begin(), ue.end(), 0);
    return ue;
}

}  // namespace

TEST(SortUsers, DescendingWithIdTieBreak) {
    EXPECT_EQ(sort_users({{0, 3.0}, {1, 1.0}, {2, 2.0}}), (std::vector<UserId>{0, 2, 1}));
    EXPECT_EQ(sort_users({{2, 1.0}, {0, 1.0}, {1, 1.0}}), (std::vector<UserId>{0, 1, 2}));
    EXPECT_EQ(sort_users(descending(5)), (std::vector<UserId>{0, 1, 2, 3, 4}));
}

TEST(Algorithm1, TieredPairsForFourUsers) {
    const auto a = cluster_algorithm1(descending(4), own_ues(4), 2, 2);
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 2}, {1, 3}}));
    EXPECT_TRUE(a.singletons.empty());
}

TEST(Algorithm1, SingleCluster) {
    const auto a = cluster_algorithm1(descending(2), own_ues(2), 1, 2);
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 1}}));
}

TEST(Algorithm1, CorrelationOverridesTierOrder) {
    // tier user 2 correlates 0.9 with head 1 and 0.3 with head 0
    RMatrix R = RMatrix::Identity(4, 4);
    auto sym = [&](int a, int b, double v) { R(a, b) = R(b, a) = v; };
    sym(2, 1, 0.9);
    sym(2, 0, 0.3);
    sym(3, 0, 0.1);
    sym(3, 1, 0.2);
    const auto a = cluster_algorithm1(descending(4), own_ues(4), 2, 2, {&R, 0.5});
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 3}, {1, 2}}));
}

TEST(Algorithm1, CorrelationBelowThresholdIgnored) {
    RMatrix R = RMatrix::Identity(4, 4);
    R(2, 1) = R(1, 2) = 0.45;
    const auto a = cluster_algorithm1(descending(4), own_ues(4), 2, 2, {&R, 0.5});
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 2}, {1, 3}}));
}

TEST(Algorithm1, UeRuleReroutesTierUser) {
    // user 2 shares a UE with head 0, so it must join head 1
    const auto a = cluster_algorithm1(descending(4), {0, 1, 0, 3}, 2, 2);
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 3}, {1, 2}}));
}

TEST(Algorithm1, UeDeadlockReported) {
    EXPECT_THROW(cluster_algorithm1(descending(4), {0, 0, 0, 0}, 2, 2), ClusteringError);
}

TEST(Algorithm1, RejectsWrongUserCount) {
    EXPECT_THROW(cluster_algorithm1(descending(5), own_ues(5), 2, 2), ConfigError);
}

TEST(Algorithm2, PairsWeakestHeadWithWeakestMember) {
    const auto a = cluster_algorithm2(descending(4), own_ues(4), 2, FeasibilityMatrix::all(4));
    // scan forms (1,3) then (0,2); final order reverses formation
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 2}, {1, 3}}));
    EXPECT_TRUE(a.singletons.empty());
}

TEST(Algorithm2, OddCountLeavesSingleton) {
    const auto a = cluster_algorithm2(descending(3), own_ues(3), 2, FeasibilityMatrix::all(3));
    EXPECT_EQ(initial_cluster_count(3, 2), 2);
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{1, 2}}));
    EXPECT_EQ(a.singletons, (std::vector<UserId>{0}));
}

TEST(Algorithm2, NothingFeasibleMeansAllSingletons) {
    const auto a = cluster_algorithm2(descending(6), own_ues(6), 3, FeasibilityMatrix::all(6, false));
    EXPECT_TRUE(a.clusters.empty());
    EXPECT_EQ(a.singletons, (std::vector<UserId>{0, 1, 2, 3, 4, 5}));
}

TEST(Algorithm2, InitialClusterCount) {
    EXPECT_EQ(initial_cluster_count(6, 3), 3);
    EXPECT_EQ(initial_cluster_count(4, 3), 3);
    EXPECT_EQ(initial_cluster_count(7, 3), 4);
    EXPECT_EQ(initial_cluster_count(3, 3), 2);
    EXPECT_EQ(initial_cluster_count(1, 3), 1);
}

TEST(Algorithm2, InfeasibleHeadDeferredAndRetried) {
    // weakest head 2 cannot take member 5; it is retried against member 4
    // after the scan, while heads 1 and 0 pair as they reach 5 and 4.
    auto C = FeasibilityMatrix::all(6);
    C.set(2, 5, false);
    C.set(2, 4, false);
    C.set(2, 3, true);
    const auto a = cluster_algorithm2(descending(6), own_ues(6), 3, C);
    EXPECT_TRUE(is_partition(a, 6));
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{2, 3}, {0, 4}, {1, 5}}));
}

TEST(Algorithm2, CorrelatedPairsComeFirst) {
    RMatrix R = RMatrix::Identity(4, 4);
    R(0, 3) = R(3, 0) = 0.95;
    const auto a = cluster_algorithm2(descending(4), own_ues(4), 2, FeasibilityMatrix::all(4), {&R, 0.5});
    EXPECT_EQ(a.clusters, (std::vector<std::vector<UserId>>{{0, 3}, {1, 2}}));
}

TEST(Algorithm2, SameUeNeverPaired) {
    const auto a = cluster_algorithm2(descending(4), {0, 1, 2, 1}, 2, FeasibilityMatrix::all(4));
    EXPECT_TRUE(respects_ue_rule(a, {0, 1, 2, 1}));
    EXPECT_TRUE(is_partition(a, 4));
}

TEST(Feasibility, MonotoneClosureUpward) {
    // only (head 5, member 9) passes the hook; every stronger head inherits it
    const auto C = build_feasibility(descending(10), [](UserId h, UserId m) { return h == 5 && m == 9; });
    for (int h = 0; h <= 5; ++h) EXPECT_TRUE(C(h, 9)) << h;
    for (int h = 6; h < 9; ++h) EXPECT_FALSE(C(h, 9)) << h;
    EXPECT_FALSE(C(0, 8));
}

TEST(Feasibility, NominalPowerCheck) {
    ScenarioConfig cfg;
    const double noise = cfg.noise_watt();
    // head far stronger than member, OMA-derived target: feasible
    EXPECT_TRUE(detail::nominal_pair_feasible(cfg, 1e-9, 1e-12));
    // equal gains cannot satisfy SIC ordering
    EXPECT_FALSE(detail::nominal_pair_feasible(cfg, 1e-11, 1e-11));
    // member gain close to the head's with a tight budget
    cfg.per_antenna_dbm = -60.0;
    EXPECT_FALSE(detail::nominal_pair_feasible(cfg, 1.2 * noise, 1.0 * noise));
}

TEST(Properties, PartitionAndUeRuleOnRandomInputs) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 3000; ++t) {
        const int L = 2 + static_cast<int>(u(rng) * 9);
        std::vector<ScalarGain> g;
        std::vector<int> ue;
        for (int i = 0; i < L; ++i) {
            g.push_back({i, u(rng)});
            ue.push_back(static_cast<int>(u(rng) * L));
        }
        RMatrix R(L, L);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) R(i, j) = i == j ? 1.0 : u(rng);
        R = (R + R.transpose()) / 2.0;
        auto C = FeasibilityMatrix::all(L);
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j) C.set(i, j, u(rng) < 0.7);
        const int nt = 1 + static_cast<int>(u(rng) * L);
        const auto pref = u(rng) < 0.5 ? CorrelationPreference{&R, 0.5} : CorrelationPreference{};
        const auto a = cluster_algorithm2(g, ue, nt, C, pref);
        ASSERT_TRUE(is_partition(a, L));
        ASSERT_TRUE(respects_ue_rule(a, ue));
        for (const auto& c : a.clusters) {
            ASSERT_EQ(c.size(), 2u);
            EXPECT_GT(g[static_cast<std::size_t>(c[0])].gain, g[static_cast<std::size_t>(c[1])].gain);
            EXPECT_TRUE(C(c[0], c[1]));
        }
        EXPECT_EQ(a, cluster_algorithm2(g, ue, nt, C, pref));
        if (L % 2 == 0) {
            try {
                const auto b = cluster_algorithm1(g, ue, L / 2, 2);
                ASSERT_TRUE(is_partition(b, L));
                ASSERT_TRUE(respects_ue_rule(b, ue));
            } catch (const ClusteringError&) {
            }
        }
    }
}

TEST(Oracle, ExhaustiveTraceUpToSixUsers) {
    const auto rep = oracle_trace::exhaustive_sweep(6);
    EXPECT_TRUE(rep.ok()) << rep.first_failure << " mismatches=" << rep.mismatches
                          << " tier=" << rep.tier_violations;
    EXPECT_GT(rep.configs, 1000);
}
