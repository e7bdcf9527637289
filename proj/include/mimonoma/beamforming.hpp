// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/types.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace mimonoma {

// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;
// Entries of the principal left-singular vector below this magnitude cannot
// serve as the denominator of a decoding weight.
inline constexpr double kWeightFloor = 1e-12;

using DefaultSvd = Eigen::JacobiSVD<CMatrix>;

struct EquivalentChannel {
    CRowVector hbar;  // 1 x N_t
    CVector u1;       // principal left-singular vector, head entry real >= 0
};

// Rotates u1 so that its head entry (index 0) is real and non-negative, then
// forms hbar = u1^H * H_n. Any unit-modulus phase on u1 gives the same result.
inline EquivalentChannel equivalent_channel_from_u1(const CMatrix& H_n, CVector u1) {
    Eigen::Index ref = 0;
    if (std::abs(u1(0)) < kWeightFloor) u1.cwiseAbs().maxCoeff(&ref);
    const cplx phase = std::conj(u1(ref)) / std::abs(u1(ref));
    u1 *= phase;
    u1(ref) = std::abs(u1(ref));
    return {u1.adjoint() * H_n, u1};
}

template <class Svd = DefaultSvd>
EquivalentChannel equivalent_channel(const CMatrix& H_n) {
    if (H_n.rows() < 1 || H_n.cols() < 1) throw ConfigError("equivalent_channel: empty cluster channel");
    if (!H_n.allFinite()) throw ConfigError("equivalent_channel: non-finite channel entries");
    if (H_n.rows() == 1) {
        if (H_n.norm() == 0.0) throw DegenerateChannelError("equivalent_channel: zero channel");
        return {H_n.row(0), CVector::Ones(1)};
    }
    Svd svd(H_n, Eigen::ComputeThinU);
    if (!(svd.singularValues()(0) > 0.0)) throw DegenerateChannelError("equivalent_channel: rank-0 cluster channel");
    return equivalent_channel_from_u1(H_n, svd.matrixU().col(0));
}

// Weight for within-cluster rank k (0-based): u1[head] / u1[k].
inline std::optional<cplx> decode_weight(const CVector& u1, Eigen::Index k) {
    if (k == 0) return cplx(1.0, 0.0);
    if (std::abs(u1(k)) < kWeightFloor) return std::nullopt;
    return u1(0) / u1(k);
}

inline std::vector<cplx> decode_weights(const CVector& u1) {
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(u1.size()));
    for (Eigen::Index k = 0; k < u1.size(); ++k) {
        const auto d = decode_weight(u1, k);
        if (!d) throw WeightSingularError("decode_weights: vanishing entry at rank " + std::to_string(k), static_cast<int>(k));
        out.push_back(*d);
    }
    return out;
}

// Right pseudo-inverse of hbar (N x N_t, N <= N_t) with each column scaled to
// unit norm, so hbar * M is diagonal with positive real diagonal.
template <class Svd = DefaultSvd>
CMatrix precoder(const CMatrix& hbar) {
    const auto N = hbar.rows();
    const auto Nt = hbar.cols();
    if (N < 1 || N > Nt) throw SingularPrecoderError("precoder: need 1 <= clusters <= transmit antennas");
    Svd svd(hbar, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0) || s(N - 1) < kRankTolerance * s(0))
        throw SingularPrecoderError("precoder: equivalent channel is rank deficient");
    CMatrix pinv = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    for (Eigen::Index n = 0; n < N; ++n) pinv.col(n) /= pinv.col(n).norm();
    return pinv;
}

enum class BeamformingKind { proposed, conventional };

struct BeamformingSolution {
    BeamformingKind kind = BeamformingKind::proposed;
    CMatrix M;     // N_t x beams, unit-norm columns
    CMatrix hbar;  // beams x N_t, the rows the precoder inverts
    std::vector<CVector> u1;
    // decode_weights[beam][rank]; nullopt marks a user in outage
    std::vector<std::vector<std::optional<cplx>>> decode_weights;
};

inline CMatrix gather_rows(const CMatrix& H, const std::vector<int>& users) {
    CMatrix out(static_cast<Eigen::Index>(users.size()), H.cols());
    for (std::size_t r = 0; r < users.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = H.row(users[r]);
    return out;
}

template <class Svd = DefaultSvd>
BeamformingSolution proposed_beamforming(const CMatrix& H, const std::vector<std::vector<int>>& beams) {
    BeamformingSolution out;
    out.kind = BeamformingKind::proposed;
    out.hbar.resize(static_cast<Eigen::Index>(beams.size()), H.cols());
    for (std::size_t n = 0; n < beams.size(); ++n) {
        auto eq = equivalent_channel<Svd>(gather_rows(H, beams[n]));
        out.hbar.row(static_cast<Eigen::Index>(n)) = eq.hbar;
        std::vector<std::optional<cplx>> d;
        for (Eigen::Index k = 0; k < eq.u1.size(); ++k) d.push_back(decode_weight(eq.u1, k));
        out.decode_weights.push_back(std::move(d));
        out.u1.push_back(std::move(eq.u1));
    }
    out.M = precoder<Svd>(out.hbar);
    return out;
}

// Zero forcing on the cluster-head rows only; every decoding weight is 1.
template <class Svd = DefaultSvd>
BeamformingSolution conventional_precoder(const CMatrix& H, const std::vector<std::vector<int>>& beams) {
    BeamformingSolution out;
    out.kind = BeamformingKind::conventional;
    out.hbar.resize(static_cast<Eigen::Index>(beams.size()), H.cols());
    for (std::size_t n = 0; n < beams.size(); ++n) {
        out.hbar.row(static_cast<Eigen::Index>(n)) = H.row(beams[n].front());
        out.decode_weights.emplace_back(beams[n].size(), cplx(1.0, 0.0));
        CVector e = CVector::Zero(static_cast<Eigen::Index>(beams[n].size()));
        e(0) = 1.0;
        out.u1.push_back(std::move(e));
    }
    out.M = precoder<Svd>(out.hbar);
    return out;
}

// max |(hbar M)_ij|, i != j, over max |(hbar M)_ii|.
inline double zf_residual(const CMatrix& hbar, const CMatrix& M) {
    const CMatrix G = hbar * M;
    double off = 0.0;
    double diag = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) {
            if (i == j)
                diag = std::max(diag, std::abs(G(i, j)));
            else
                off = std::max(off, std::abs(G(i, j)));
        }
    return off / diag;
}

// sum_{i != n} |h m_i|^2 p_i / (|h m_n|^2 p_n)
inline double inter_cluster_leakage_ratio(const CRowVector& h, const CMatrix& M, Eigen::Index n,
                                          const std::vector<double>& beam_power) {
    double leak = 0.0;
    for (Eigen::Index i = 0; i < M.cols(); ++i)
        if (i != n) leak += std::norm((h * M.col(i)).value()) * beam_power[static_cast<std::size_t>(i)];
    const double own = std::norm((h * M.col(n)).value()) * beam_power[static_cast<std::size_t>(n)];
    return leak / own;
}

}  // namespace mimonoma
