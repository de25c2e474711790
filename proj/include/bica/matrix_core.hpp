#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "bica/errors.hpp"

namespace bica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct WhiteningResult {
    Matrix whitened;  // m x N, sample covariance = I
    Vector mean;      // length m, removed before whitening
    Matrix transform; // m x m, maps centered data to whitened data
};

// Subtracts the sample mean of each row. Returns (centered, mean).
std::pair<Matrix, Vector> center(const Matrix& data);

// Whitens row-wise zero-mean data via symmetric eigendecomposition of the
// sample covariance (divisor N-1). Throws RankDeficient when the smallest
// eigenvalue is <= 1e-12 times the largest.
WhiteningResult whiten(const Matrix& centered);

// Symmetric decorrelation: (W W^T)^{-1/2} W.
Matrix sym_decorrelate(const Matrix& W);

// Deterministic random orthonormal matrix: polar factor of an m x m matrix
// of standard normal draws (see Rng for the generator identity).
Matrix random_orthonormal(int m, std::uint64_t seed);

// Relative eigenvalue tolerance used by all rank checks.
inline constexpr double kRankTol = 1e-12;

} // namespace bica
