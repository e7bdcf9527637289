// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force numerical solver for the intra-cluster problem
//
//   maximize   sum_k log2(1 + g_k p_k / (g_k sum_{j<k} p_j + 1))
//   subject to sum_k p_k <= p_n
//              log2(1 + g_k p_k / (g_k sum_{j<k} p_j + 1)) >= R_k / B,  k >= 2
//              (p_k - sum_{j<k} p_j) g_{k-1} >= p_tol,                   k >= 2
//
// It evaluates constraints and objective directly and searches the power
// simplex, sharing nothing with the closed-form allocator. Intended for
// validation at desk scale (K <= 4).

#include "mimonoma/power.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace mimonoma::oracle {

struct Problem {
    std::vector<double> g;
    double p_n = 0.0;
    std::vector<double> min_se;  // R_k / B per rank; [0] unused
    double p_tol = 0.0;

    std::size_t K() const { return g.size(); }

    double user_se(const std::vector<double>& p, std::size_t k) const {
        double below = 0.0;
        for (std::size_t j = 0; j < k; ++j) below += p[j];
        return std::log2(1.0 + g[k] * p[k] / (g[k] * below + 1.0));
    }

    double objective(const std::vector<double>& p) const {
        double total = 0.0;
        for (std::size_t k = 0; k < K(); ++k) total += user_se(p, k);
        return total;
    }

    // Largest normalised constraint violation; <= 0 means feasible.
    double violation(const std::vector<double>& p) const {
        double worst = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = 0; k < K(); ++k) {
            worst = std::max(worst, -p[k] / p_n);
            sum += p[k];
        }
        // p_K = p_n - sum(others) can round a few ulps over the budget
        worst = std::max(worst, (sum - p_n) / p_n - 8.0 * std::numeric_limits<double>::epsilon());
        double below = 0.0;
        for (std::size_t k = 0; k < K(); ++k) {
            if (k > 0) {
                worst = std::max(worst, min_se[k] - user_se(p, k));
                const double margin = (p[k] - below) * g[k - 1];
                worst = std::max(worst, (p_tol - margin) / std::max(p_tol, 1e-300));
            }
            below += p[k];
        }
        return worst;
    }
};

inline Problem make_problem(const std::vector<double>& g, double p_n, const RateTargets& targets, double p_tol) {
    Problem pr{g, p_n, {}, p_tol};
    pr.min_se.assign(g.size(), 0.0);
    for (std::size_t k = 1; k < g.size(); ++k) pr.min_se[k] = targets.rate_bps[k] / targets.bandwidth_hz;
    return pr;
}

namespace detail {

// Two users, the budget spent in full: p_2 = p_n - p_1. Both constraints
// tighten as p_1 grows, so the feasible p_1 form an interval [0, hi].
inline std::optional<std::vector<double>> solve_two_users(const Problem& pr) {
    auto powers = [&](double p1) { return std::vector<double>{p1, pr.p_n - p1}; };
    auto ok = [&](double p1) { return pr.violation(powers(p1)) <= 0.0; };
    if (!ok(0.0)) return std::nullopt;

    double lo = 0.0;
    double hi = pr.p_n;
    if (!ok(hi)) {
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (ok(mid) ? lo : hi) = mid;
        }
        hi = lo;
    }

    // golden-section search for the best feasible p_1 on [0, hi]
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = pr.objective(powers(c));
    double fd = pr.objective(powers(d));
    for (int it = 0; it < 300 && b - a > 1e-15 * pr.p_n; ++it) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = pr.objective(powers(d));
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = pr.objective(powers(c));
        }
    }
    double best = 0.5 * (a + b);
    for (double cand : {a, b, hi}) {
        if (ok(cand) && pr.objective(powers(cand)) > pr.objective(powers(best))) best = cand;
    }
    if (!ok(best)) best = a;
    return powers(best);
}

// Pattern search over (p_1, ..., p_{K-1}) with p_K = p_n - sum. Each round
// evaluates a full grid of `points` per axis around the incumbent; the box
// shrinks when the incumbent survives and recentres otherwise.
template <class Score>
std::vector<double> grid_refine(const Problem& pr, std::vector<double> x, double half_width, double min_width,
                                Score score, double stop_at = std::numeric_limits<double>::infinity(),
                                int points = 9) {
    const std::size_t dims = x.size();
    auto full = [&](const std::vector<double>& free) {
        std::vector<double> p(free);
        double s = 0.0;
        for (double v : free) s += v;
        p.push_back(pr.p_n - s);
        return p;
    };
    double best_score = score(full(x));
    std::vector<int> idx(dims, 0);
    std::vector<double> cand(dims);
    for (int round = 0; round < 4000 && half_width > min_width && best_score < stop_at; ++round) {
        const double step = 2.0 * half_width / (points - 1);
        std::vector<double> best_x = x;
        double round_best = best_score;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t d = 0; d < dims; ++d) cand[d] = std::max(0.0, x[d] - half_width + step * idx[d]);
            const double s = score(full(cand));
            if (s > round_best) {
                round_best = s;
                best_x = cand;
            }
            std::size_t d = 0;
            while (d < dims && ++idx[d] == points) idx[d++] = 0;
            if (d == dims) break;
        }
        if (round_best > best_score) {
            best_score = round_best;
            x = best_x;
        } else {
            half_width *= 0.5;
        }
    }
    return full(x);
}

}  // namespace detail

struct OracleResult {
    bool feasible = false;
    std::vector<double> power_w;
    double objective = 0.0;
};

inline OracleResult solve(const Problem& pr) {
    OracleResult out;
    const std::size_t K = pr.K();
    if (K == 1) {
        out.feasible = true;
        out.power_w = {pr.p_n};
    } else if (K == 2) {
        auto p = detail::solve_two_users(pr);
        if (!p) return out;
        out.feasible = true;
        out.power_w = *p;
    } else {
        const double floor_width = 1e-13 * pr.p_n;
        std::vector<double> start(K - 1, pr.p_n / static_cast<double>(K));
        // phase 1: drive the violation to zero
        auto p = detail::grid_refine(
            pr, start, pr.p_n / 2.0, floor_width,
            [&](const std::vector<double>& q) { return -std::max(0.0, pr.violation(q)); }, 0.0);
        if (pr.violation(p) > 0.0) return out;
        // phase 2: best objective among feasible points
        std::vector<double> free(p.begin(), p.end() - 1);
        p = detail::grid_refine(pr, free, pr.p_n / 4.0, floor_width, [&](const std::vector<double>& q) {
            return pr.violation(q) <= 0.0 ? pr.objective(q) : -std::numeric_limits<double>::infinity();
        });
        out.feasible = true;
        out.power_w = p;
    }
    out.objective = pr.objective(out.power_w);
    return out;
}

// Same contract as intra_cluster_allocate, solved numerically. Binding tags
// mark whichever constraint is closer to tight.
inline PowerAllocation oracle_allocate(const std::vector<double>& g, double p_n, const RateTargets& targets, double p_tol) {
    if (g.size() > 4) throw ConfigError("oracle_allocate: desk-scale oracle supports K <= 4");
    const Problem pr = make_problem(g, p_n, targets, p_tol);
    const OracleResult r = solve(pr);
    PowerAllocation out;
    out.budget_w = p_n;
    out.p_tol_w = p_tol;
    out.feasible = r.feasible;
    if (!r.feasible) return out;
    out.power_w = r.power_w;
    out.binding.assign(g.size(), Binding::head_excess);
    double below = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k > 0) {
            const double rate_slack = std::abs(pr.user_se(r.power_w, k) - pr.min_se[k]) / std::max(pr.min_se[k], 1e-300);
            const double sic_slack = std::abs((r.power_w[k] - below) * g[k - 1] - p_tol) / std::max(p_tol, 1e-300);
            out.binding[k] = sic_slack < rate_slack ? Binding::sic_bound : Binding::rate_bound;
        }
        below += r.power_w[k];
    }
    return out;
}

}  // namespace mimonoma::oracle
