// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/power.hpp"
#include "mimonoma/types.hpp"

#include <cmath>
#include <vector>

namespace mimonoma {

// Desired-beam gain over inter-beam leakage plus noise, per watt:
//   |d h m_n|^2 / (sum_{i != n} |d h m_i|^2 p_i + |d|^2 N0 B)
// `noise_w` is N0 * B. The |d|^2 on the noise keeps the weight a pure
// receive-side scaling of signal, interference and noise alike.
inline double normalized_gain(const CRowVector& h, cplx d, const CMatrix& M, Eigen::Index n,
                              const std::vector<double>& beam_power, double noise_w) {
    const double d2 = std::norm(d);
    double leak = 0.0;
    for (Eigen::Index i = 0; i < M.cols(); ++i)
        if (i != n) leak += d2 * std::norm((h * M.col(i)).value()) * beam_power[static_cast<std::size_t>(i)];
    const double own = d2 * std::norm((h * M.col(n)).value());
    return own / (leak + d2 * noise_w);
}

// B log2(1 + g p / (g * stronger_power + 1)); the head passes 0.
inline double user_rate(double g, double p, double stronger_power, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + g * p / (g * stronger_power + 1.0));
}

// SINR assembled term by term from the received-signal model, for checking
// the normalized-gain shortcut.
inline double sinr_from_terms(const CRowVector& h, cplx d, const CMatrix& M, Eigen::Index n, double p_k,
                              double stronger_power, const std::vector<double>& beam_power, double noise_w) {
    const CRowVector dh = d * h;
    const double own = std::norm((dh * M.col(n)).value());
    double inter = 0.0;
    for (Eigen::Index i = 0; i < M.cols(); ++i)
        if (i != n) inter += std::norm((dh * M.col(i)).value()) * beam_power[static_cast<std::size_t>(i)];
    return own * p_k / (own * stronger_power + inter + std::norm(d) * noise_w);
}

struct CellThroughput {
    double cell_rate_bps = 0.0;
    double spectral_efficiency = 0.0;  // bits/s/Hz
};

inline CellThroughput cell_throughput(const std::vector<double>& rates_bps, double bandwidth_hz) {
    CellThroughput out;
    for (double r : rates_bps) out.cell_rate_bps += r;
    out.spectral_efficiency = out.cell_rate_bps / bandwidth_hz;
    return out;
}

// Rate of a user holding fraction beta of the band with power beta * p_n.
// Power and noise both scale by beta, so the per-Hz SINR is g_full * p_n with
// g_full the full-band normalized gain.
inline double oma_rate(double g_full, double beta, double p_n, double bandwidth_hz) {
    if (!(beta > 0.0) || beta > 1.0) throw DomainError("oma_rate: beta must lie in (0, 1]");
    return beta * bandwidth_hz * std::log2(1.0 + g_full * p_n);
}

// Requirements for one beam: rank k >= 2 must reach its own OMA rate at the
// configured fraction. gains are full-band normalized gains in rank order.
template <class BetaForRank>
RateTargets rate_targets_from_oma(const std::vector<double>& gains, double p_n, BetaForRank beta_for_rank,
                                  double bandwidth_hz) {
    RateTargets t;
    t.bandwidth_hz = bandwidth_hz;
    t.rate_bps.assign(gains.size(), 0.0);
    for (std::size_t k = 1; k < gains.size(); ++k)
        t.rate_bps[k] = oma_rate(gains[k], beta_for_rank(static_cast<int>(k) + 1), p_n, bandwidth_hz);
    return t;
}

}  // namespace mimonoma
