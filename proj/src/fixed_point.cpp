#include "bica/fixed_point.hpp"

#include <cmath>

namespace bica {

void ContrastFunction::eval(double u, double& g, double& dg) const {
    switch (kind_) {
    case Kind::Boosted: {
        double f;
        model_->eval(u, f, g, dg);
        return;
    }
    case Kind::G0:
        g = u * u * u;
        dg = 3.0 * u * u;
        return;
    case Kind::G1: {
        const double t = std::tanh(u);
        g = t;
        dg = 1.0 - t * t;
        return;
    }
    }
}

Matrix fixed_point_update(const Matrix& W, const Matrix& whitened,
                          const std::vector<ContrastFunction>& contrasts) {
    const Eigen::Index m = W.rows();
    const Eigen::Index n = whitened.cols();
    if (static_cast<Eigen::Index>(contrasts.size()) != m)
        throw InvalidData("fixed_point_update: one contrast per row required");

    Matrix updated(m, W.cols());
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::VectorXd proj = whitened.transpose() * W.row(i).transpose();
        double dg_mean = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            double dg;
            contrasts[i].eval(proj(j), g(j), dg);
            dg_mean += dg;
        }
        dg_mean /= static_cast<double>(n);
        updated.row(i) =
            (whitened * g).transpose() / static_cast<double>(n) -
            dg_mean * W.row(i);
        if (updated.row(i).norm() < 1e-12)
            throw DegenerateUpdate("fixed_point_update: row " + std::to_string(i) +
                                   " collapsed to zero");
    }
    return sym_decorrelate(updated);
}

double convergence_gap(const Matrix& w_new, const Matrix& w_old) {
    return 1.0 - (w_new * w_old.transpose()).diagonal().cwiseAbs().minCoeff();
}

Matrix fastica_baseline(const Matrix& whitened, ContrastFunction::Kind kind,
                        int maxit, std::uint64_t seed, double tol) {
    if (maxit < 1) throw InvalidData("fastica_baseline: maxit must be >= 1");
    const int m = static_cast<int>(whitened.rows());
    std::vector<ContrastFunction> contrasts;
    contrasts.reserve(m);
    for (int i = 0; i < m; ++i)
        contrasts.push_back(kind == ContrastFunction::Kind::G0
                                ? ContrastFunction::g0()
                                : ContrastFunction::g1());

    Matrix W = random_orthonormal(m, seed);
    for (int it = 0; it < maxit; ++it) {
        Matrix W_new = fixed_point_update(W, whitened, contrasts);
        const double gap = convergence_gap(W_new, W);
        W = std::move(W_new);
        if (gap < tol) break;
    }
    return W;
}

} // namespace bica
