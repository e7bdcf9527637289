// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mimonoma {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CRowVector = Eigen::RowVectorXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

using UserId = int;

// Argument outside the mathematical domain of an operation (negative
// distance, correlation above one, bandwidth fraction out of range).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Scenario or call parameters that cannot describe a valid simulation.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Clustering could not place every user (e.g. UE rule blocks a tier).
struct ClusteringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cluster channel with no energy, so no principal direction exists.
struct DegenerateChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The matrix being pseudo-inverted for zero forcing is rank deficient.
struct SingularPrecoderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decoding scaling weight would divide by a vanishing singular-vector entry.
struct WeightSingularError : std::runtime_error {
    WeightSingularError(const std::string& what, int rank) : std::runtime_error(what), rank_in_cluster(rank) {}
    int rank_in_cluster;
};

// Intra-cluster gains violate the strict descending order the allocator needs.
struct OrderingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace mimonoma
