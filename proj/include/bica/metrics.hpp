#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "bica/errors.hpp"
#include "bica/matrix_core.hpp"

namespace bica {

// Amari distance between unmixing matrices: with r = W * W0^{-1} computed
// after normalizing each row of W and W0 to unit Euclidean norm,
//   (1/2m) sum_i (sum_j |r_ij| / max_j |r_ij| - 1)
// + (1/2m) sum_j (sum_i |r_ij| / max_i |r_ij| - 1).
// Row normalization makes the value invariant to row scaling of either
// argument (a no-op for orthonormal matrices). Zero iff W and W0 agree up
// to row permutation and scaling.
double amari(const Matrix& W, const Matrix& W0);

struct SirReport {
    double mean_sir_db = 0.0;
    std::vector<double> per_component_db;
};

// Signal-to-interference ratio: rows are standardized, estimated components
// are matched to true components by the assignment maximizing total
// |correlation|, then SIR = 10 log10(rho^2 / (1 - rho^2)) per matched pair,
// capped at +150 dB.
SirReport sir(const Matrix& true_sources, const Matrix& estimated);

inline constexpr double kSirCapDb = 150.0;

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// algorithm with potentials, O(n^3)). Returns the column chosen per row.
std::vector<int> min_cost_assignment(const Matrix& cost);

} // namespace bica
