#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bica/density.hpp"
#include "bica/matrix_core.hpp"

namespace bica {

// Per-row nonlinearity for the fixed-point update: g(u) = f'(u) and
// g'(u) = f''(u) of a source log-density. Boosted models evaluate the
// fitted density; G0/G1 are the classic fixed contrasts,
//   G0(u) = u^4/4  ->  g = u^3,      g' = 3u^2
//   G1(u) = ln cosh u -> g = tanh u, g' = 1 - tanh^2 u
class ContrastFunction {
public:
    enum class Kind { Boosted, G0, G1 };

    static ContrastFunction boosted(const SourceDensityModel* model) {
        return {Kind::Boosted, model};
    }
    static ContrastFunction g0() { return {Kind::G0, nullptr}; }
    static ContrastFunction g1() { return {Kind::G1, nullptr}; }

    void eval(double u, double& g, double& dg) const;
    Kind kind() const { return kind_; }

private:
    ContrastFunction(Kind kind, const SourceDensityModel* model)
        : kind_(kind), model_(model) {}
    Kind kind_;
    const SourceDensityModel* model_;
};

// One approximate-Newton sweep over all rows,
//   w_i <- (1/N) sum_j x_j g_i(w_i' x_j) - [(1/N) sum_j g_i'(w_i' x_j)] w_i,
// followed by symmetric decorrelation. Throws DegenerateUpdate when a row
// collapses below 1e-12 before decorrelation.
Matrix fixed_point_update(const Matrix& W, const Matrix& whitened,
                          const std::vector<ContrastFunction>& contrasts);

// Sign-invariant convergence measure 1 - min_i |(W_new W_old^T)_ii|.
double convergence_gap(const Matrix& w_new, const Matrix& w_old);

// Symmetric FastICA with a fixed contrast, random orthonormal start.
Matrix fastica_baseline(const Matrix& whitened, ContrastFunction::Kind kind,
                        int maxit, std::uint64_t seed, double tol = 1e-8);

} // namespace bica
