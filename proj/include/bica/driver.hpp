#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bica/density.hpp"
#include "bica/fixed_point.hpp"
#include "bica/matrix_core.hpp"

namespace bica {

struct BicaConfig {
    int grid_size = 500;     // L
    double df = 3.0;         // weak-learner degrees of freedom
    int boost_iters = 5;     // M
    int maxit = 20;          // outer iterations
    std::uint64_t seed = 0;
    double tol = 1e-8;       // early-stop threshold on the W change
    int sweeps_per_iter = 1; // fixed-point sweeps per outer iteration
    int threads = 1;         // parallelism of the per-component density loop
};

struct SeparationResult {
    Matrix W;                               // orthonormal unmixing matrix
    std::vector<SourceDensityModel> models; // per-component densities
    std::vector<double> loglik_per_iter;    // total modified log-likelihood
    int iterations_run = 0;
    WhiteningResult whitening;

    // estimated sources y = W * whitened
    Matrix sources() const { return W * whitening.whitened; }
};

// Observer invoked with every intermediate W (after each fixed-point sweep).
using IterationObserver = std::function<void(int iteration, const Matrix& W)>;

// Joint maximization: alternates boosted density estimation per component
// with the fixed-point W update, starting from a seeded random orthonormal W.
// maxit caps the total number of outer iterations; budget left over after a
// start converges funds further deterministic starts, and the solution with
// the highest modified log-likelihood is returned.
SeparationResult separate(const Matrix& data, const BicaConfig& config,
                          const IterationObserver& observer = nullptr);

// 2-D likelihood scan: for each angle (degrees), fixes
// W = [[cos t, sin t], [-sin t, cos t]], fits the densities at that rotation
// and reports the total modified log-likelihood. No W update is performed.
std::vector<std::pair<double, double>>
likelihood_scan(const Matrix& data2d, const std::vector<double>& angles_deg,
                const BicaConfig& config);

} // namespace bica
