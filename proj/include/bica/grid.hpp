#pragma once

#include <Eigen/Dense>

#include "bica/errors.hpp"

namespace bica {

// Histogram grid over one estimated-source sample vector: L equally spaced
// values spanning [min, max] with step delta, and the empirical frequency of
// each half-open bin (lo, hi]; the lowest bin is closed below so every
// sample is counted exactly once.
struct Grid {
    Eigen::VectorXd values; // ascending, equally spaced
    double step = 0.0;
    Eigen::VectorXd freqs;  // nonnegative, sums to 1
    int size = 0;
};

Grid build_grid(const Eigen::VectorXd& samples, int num_points);

} // namespace bica
