// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/scenario.hpp"
#include "mimonoma/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mimonoma {

using Rng = std::mt19937_64;

// Independent stream for one trial of a sweep.
inline Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32),
                      0x6d696d6fu};
    return Rng(seq);
}

struct UserGeometry {
    UserId user_id = 0;
    double distance_m = 0.0;
    int ue_id = 0;  // several receive antennas may share a UE
};

struct ChannelRealization {
    CMatrix H;  // users x transmit antennas, amplitude gains
    std::vector<UserGeometry> geometry;
    double rho = 0.0;
    std::uint64_t seed = 0;

    int users() const { return static_cast<int>(H.rows()); }
    int tx() const { return static_cast<int>(H.cols()); }
    std::vector<int> ue_ids() const {
        std::vector<int> out;
        out.reserve(geometry.size());
        for (const auto& g : geometry) out.push_back(g.ue_id);
        return out;
    }
};

struct ScalarGain {
    UserId user_id = 0;
    double gain = 0.0;
};

// Power attenuation d^-alpha; no reference loss, 0 dBi antennas.
inline double path_loss(double distance_m, double alpha) {
    if (!(distance_m > 0.0)) throw DomainError("path_loss: distance must be positive");
    if (!(alpha > 0.0)) throw DomainError("path_loss: exponent must be positive");
    return std::pow(distance_m, -alpha);
}

// iid CN(0,1) entries: real and imaginary parts each N(0, 1/2).
inline CMatrix draw_fading(int n_users, int n_tx, Rng& rng) {
    if (n_users < 1 || n_tx < 1) throw ConfigError("draw_fading: dimensions must be >= 1");
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix out(n_users, n_tx);
    for (int r = 0; r < n_users; ++r)
        for (int c = 0; c < n_tx; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(r, c) = cplx(re, im);
        }
    return out;
}

// rho * head + sqrt(1 - rho^2) * w, with w a fresh unit-variance row.
inline CRowVector draw_correlated_fading(const CRowVector& head_row, double rho, Rng& rng) {
    if (rho < 0.0 || rho > 1.0) throw DomainError("draw_correlated_fading: rho must lie in [0, 1]");
    if (rho == 1.0) return head_row;
    const CMatrix w = draw_fading(1, static_cast<int>(head_row.size()), rng);
    return rho * head_row + std::sqrt(1.0 - rho * rho) * w.row(0);
}

inline double uniform_disc_radius(double radius, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // 1 - u lies in (0, 1], keeping the distance strictly positive
    return radius * std::sqrt(1.0 - u(rng));
}

inline double uniform_annulus_radius(double inner, double outer, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r2 = inner * inner + u(rng) * (outer * outer - inner * inner);
    return std::min(outer, std::sqrt(r2));
}

// Places head_count() candidates uniformly in the head disc and the rest
// uniformly in the cell-edge annulus [inter_site - edge, inter_site]. When
// rho > 0, edge user u is faded in correlation with head (u - heads) mod heads.
inline ChannelRealization realize_channel(const ScenarioConfig& config, Rng& rng, std::uint64_t seed = 0) {
    const double edge = config.edge_coverage();
    const double inner = config.inter_site_m - edge;
    if (!(edge > 0.0) || inner < 0.0 || edge > config.inter_site_m)
        throw ConfigError("realize_channel: empty cell-edge annulus");
    if (config.head_radius_m >= inner) throw ConfigError("realize_channel: head disc overlaps the cell-edge band");
    if (config.rho < 0.0 || config.rho > 1.0) throw DomainError("realize_channel: rho must lie in [0, 1]");

    const int users = config.user_count();
    const int heads = config.head_count();

    ChannelRealization out;
    out.rho = config.rho;
    out.seed = seed;
    out.geometry.resize(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u) {
        const double d = u < heads ? uniform_disc_radius(config.head_radius_m, rng)
                                   : uniform_annulus_radius(inner, config.inter_site_m, rng);
        out.geometry[static_cast<std::size_t>(u)] = UserGeometry{u, d, u};
    }

    CMatrix fading = draw_fading(users, config.n_tx, rng);
    if (config.rho > 0.0 && heads > 0) {
        for (int u = heads; u < users; ++u) {
            const int head = (u - heads) % heads;
            fading.row(u) = draw_correlated_fading(fading.row(head), config.rho, rng);
        }
    }

    out.H.resize(users, config.n_tx);
    for (int u = 0; u < users; ++u)
        out.H.row(u) = std::sqrt(path_loss(out.geometry[static_cast<std::size_t>(u)].distance_m, config.alpha)) *
                       fading.row(u);
    return out;
}

inline ScalarGain scalar_gain(const ChannelRealization& ch, UserId user_id) {
    if (user_id < 0 || user_id >= ch.users())
        throw ConfigError("scalar_gain: invalid user id " + std::to_string(user_id));
    return {user_id, ch.H.row(user_id).squaredNorm()};
}

inline std::vector<ScalarGain> scalar_gains(const ChannelRealization& ch) {
    std::vector<ScalarGain> out;
    out.reserve(static_cast<std::size_t>(ch.users()));
    for (int u = 0; u < ch.users(); ++u) out.push_back(scalar_gain(ch, u));
    return out;
}

// |<a, b>| / (|a| |b|): correlation magnitude of two zero-mean fading rows.
inline double fading_correlation(const CRowVector& a, const CRowVector& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(a.dot(b)) / (na * nb);
}

inline RMatrix correlation_matrix(const CMatrix& H) {
    const auto n = H.rows();
    RMatrix R = RMatrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) R(i, j) = R(j, i) = fading_correlation(H.row(i), H.row(j));
    return R;
}

}  // namespace mimonoma
