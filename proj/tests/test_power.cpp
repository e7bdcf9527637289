// SPDX-License-Identifier: Apache-2.0
#include "mimonoma/metrics.hpp"
#include "mimonoma/power.hpp"
#include "mimonoma/power_oracle.hpp"
#include "mimonoma/units.hpp"

#include "support/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace mimonoma;

namespace {

constexpr double kB = 8.64e6;

RateTargets phi_targets(std::vector<double> phi) {
    phi.insert(phi.begin(), 1.0);
    return RateTargets::from_phi(phi, kB);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(InterClusterSplit, EqualSizesGetPerAntennaBudget) {
    const double w = units::dbm_to_watt(43.0);
    const auto p = inter_cluster_split(w, {2, 2, 2});
    ASSERT_EQ(p.size(), 3u);
    for (double x : p) EXPECT_NEAR(x, 19.952623149688797, 1e-12);
}

TEST(InterClusterSplit, OverridesHonoured) {
    const auto p = inter_cluster_split(units::dbm_to_watt(43.0), {2, 1},
                                       {units::dbm_to_watt(43.0), units::dbm_to_watt(40.0)});
    EXPECT_NEAR(p[0], 19.952623149688797, 1e-12);
    EXPECT_NEAR(p[1], 10.0, 1e-12);
}

TEST(InterClusterSplit, ProportionalToSize) {
    EXPECT_EQ(inter_cluster_split(5.0, {4}), std::vector<double>{5.0});
    const auto p = inter_cluster_split(6.0, {2, 1});
    EXPECT_NEAR(p[0], 8.0, 1e-12);
    EXPECT_NEAR(p[1], 4.0, 1e-12);
    EXPECT_THROW(inter_cluster_split(6.0, {2, 1}, {1.0}), ConfigError);
}

TEST(IntraCluster, SingleUserTakesEverything) {
    const auto a = intra_cluster_allocate({3.0}, 7.0, phi_targets({}), 0.01);
    EXPECT_TRUE(a.feasible);
    EXPECT_EQ(a.power_w, std::vector<double>{7.0});
    EXPECT_TRUE(feasibility_check({3.0}, 7.0, phi_targets({}), 0.01));
}

TEST(IntraCluster, RateBoundTwoUsers) {
    const auto a = intra_cluster_allocate({10.0, 1.0}, 10.0, phi_targets({2.0}), 0.01);
    ASSERT_TRUE(a.feasible);
    EXPECT_NEAR(a.power_w[0], 4.5, 1e-12);
    EXPECT_NEAR(a.power_w[1], 5.5, 1e-12);
    EXPECT_EQ(a.binding[1], Binding::rate_bound);
    EXPECT_NEAR(user_rate(1.0, a.power_w[1], a.power_w[0], kB), kB, 1e-9 * kB);
}

TEST(IntraCluster, SicBoundTwoUsers) {
    const auto a = intra_cluster_allocate({10.0, 1.0}, 10.0, phi_targets({1.0001}), 20.0);
    ASSERT_TRUE(a.feasible);
    EXPECT_NEAR(a.power_w[0], (10.0 - 20.0 / 10.0) / 2.0, 1e-12);
    EXPECT_NEAR(a.power_w[1], (10.0 + 20.0 / 10.0) / 2.0, 1e-12);
    EXPECT_EQ(a.binding[1], Binding::sic_bound);
}

TEST(IntraCluster, HeadAtZeroIsFeasible) {
    // g_2 p_2 = phi - 1 with p_1 = 0 spends exactly the budget
    const auto a = intra_cluster_allocate({10.0, 0.5}, 2.0, phi_targets({2.0}), 0.01);
    EXPECT_TRUE(a.feasible);
    EXPECT_EQ(a.power_w[0], 0.0);
    EXPECT_EQ(a.power_w[1], 2.0);
    EXPECT_TRUE(feasibility_check({10.0, 0.5}, 2.0, phi_targets({2.0}), 0.01));
    // the oracle agrees on the closed boundary
    const auto o = oracle::oracle_allocate({10.0, 0.5}, 2.0, phi_targets({2.0}), 0.01);
    EXPECT_TRUE(o.feasible);
    EXPECT_NEAR(o.power_w[0], 0.0, 1e-9);
}

TEST(IntraCluster, HugeTargetIsInfeasibleWithDeficit) {
    const auto t = phi_targets({1e6});
    const auto a = intra_cluster_allocate({10.0, 1.0}, 10.0, t, 0.01);
    EXPECT_FALSE(a.feasible);
    EXPECT_FALSE(feasibility_check({10.0, 1.0}, 10.0, t, 0.01));
    EXPECT_FALSE(oracle::oracle_allocate({10.0, 1.0}, 10.0, t, 0.01).feasible);
    // the reported deficit closes the gap exactly
    const auto topped = intra_cluster_allocate({10.0, 1.0}, 10.0 + a.deficit_w, t, 0.01);
    EXPECT_TRUE(topped.feasible);
    EXPECT_NEAR(topped.power_w[0], 0.0, 1e-6);
}

TEST(IntraCluster, RejectsNonMonotoneGains) {
    EXPECT_THROW(intra_cluster_allocate({1.0, 2.0}, 1.0, phi_targets({1.5}), 0.01), OrderingError);
    EXPECT_THROW(intra_cluster_allocate({1.0, 1.0}, 1.0, phi_targets({1.5}), 0.01), OrderingError);
    EXPECT_THROW(intra_cluster_allocate({1.0, 0.0}, 1.0, phi_targets({1.5}), 0.01), OrderingError);
}

TEST(IntraCluster, ThreeUserHandTrace) {
    // k=3: rate needs S_2 <= (12 - 1/1)/2 = 5.5, SIC needs S_2 <= (12 - 0.5/2)/2 = 5.875 -> rate
    // k=2: rate needs S_1 <= (5.5 - 1/2)/2 = 2.5, SIC needs S_1 <= (5.5 - 0.5/8)/2 = 2.71875 -> rate
    const auto a = intra_cluster_allocate({8.0, 2.0, 1.0}, 12.0, phi_targets({2.0, 2.0}), 0.5);
    ASSERT_TRUE(a.feasible);
    EXPECT_NEAR(a.power_w[0], 2.5, 1e-12);
    EXPECT_NEAR(a.power_w[1], 3.0, 1e-12);
    EXPECT_NEAR(a.power_w[2], 6.5, 1e-12);
}

TEST(IntraCluster, StructuralInvariantsOnRandomInstances) {
    std::mt19937_64 rng(77);
    int checked = 0;
    while (checked < 2000) {
        const auto inst = testing_support::random_instance(rng);
        const auto a = intra_cluster_allocate(inst.g, inst.p_n, inst.targets, inst.p_tol);
        if (!a.feasible) continue;
        ++checked;
        EXPECT_NEAR(sum(a.power_w), inst.p_n, 1e-9 * inst.p_n);
        double below = 0.0;
        for (std::size_t k = 0; k < inst.g.size(); ++k) {
            EXPECT_GE(a.power_w[k], 0.0);
            if (k > 0) {
                // NOMA power ordering
                EXPECT_GT(a.power_w[k], below);
                const auto tight = testing_support::tightness(inst, a.power_w, k);
                EXPECT_NE(tight.rate, tight.sic) << "exactly one constraint must bind at rank " << k;
                EXPECT_EQ(tight.sic, a.binding[k] == Binding::sic_bound);
            }
            below += a.power_w[k];
        }
    }
}

TEST(IntraCluster, MoreBudgetNeverHurts) {
    std::mt19937_64 rng(78);
    for (int i = 0; i < 500; ++i) {
        const auto inst = testing_support::random_instance(rng);
        const auto a = intra_cluster_allocate(inst.g, inst.p_n, inst.targets, inst.p_tol);
        const auto b = intra_cluster_allocate(inst.g, inst.p_n * 1.5, inst.targets, inst.p_tol);
        if (!a.feasible) continue;
        ASSERT_TRUE(b.feasible);
        EXPECT_GE(b.power_w[0], a.power_w[0]);
        EXPECT_GE(cluster_spectral_efficiency(inst.g, b.power_w), cluster_spectral_efficiency(inst.g, a.power_w) - 1e-12);
    }
}

TEST(Oracle, MatchesClosedFormOnKnownCases) {
    const auto rate = oracle::oracle_allocate({10.0, 1.0}, 10.0, phi_targets({2.0}), 0.01);
    ASSERT_TRUE(rate.feasible);
    EXPECT_NEAR(rate.power_w[0], 4.5, 1e-4);
    EXPECT_NEAR(rate.power_w[1], 5.5, 1e-4);
    const auto sic = oracle::oracle_allocate({10.0, 1.0}, 10.0, phi_targets({1.0001}), 20.0);
    ASSERT_TRUE(sic.feasible);
    EXPECT_NEAR(sic.power_w[0], 4.0, 1e-4);
    EXPECT_NEAR(sic.power_w[1], 6.0, 1e-4);
}

TEST(Oracle, AgreesWithClosedFormOnRandomInstances) {
    std::mt19937_64 rng(79);
    int checked = 0;
    while (checked < 150) {
        const auto inst = testing_support::random_instance(rng);
        const auto a = intra_cluster_allocate(inst.g, inst.p_n, inst.targets, inst.p_tol);
        const auto o = oracle::oracle_allocate(inst.g, inst.p_n, inst.targets, inst.p_tol);
        ASSERT_EQ(a.feasible, o.feasible);
        if (!a.feasible) continue;
        ++checked;
        for (std::size_t k = 0; k < inst.g.size(); ++k) EXPECT_NEAR(a.power_w[k], o.power_w[k], 1e-4);
        EXPECT_GE(cluster_spectral_efficiency(inst.g, a.power_w), cluster_spectral_efficiency(inst.g, o.power_w) - 1e-6);
    }
}

TEST(Oracle, RefusesLargeClusters) {
    EXPECT_THROW(oracle::oracle_allocate({5, 4, 3, 2, 1}, 10.0, phi_targets({1.1, 1.1, 1.1, 1.1}), 0.01), ConfigError);
}
