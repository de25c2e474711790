#include "bica/matrix_core.hpp"

#include <Eigen/Eigenvalues>

#include "bica/rng.hpp"

namespace bica {

std::pair<Matrix, Vector> center(const Matrix& data) {
    if (!data.allFinite())
        throw InvalidData("center: input contains non-finite entries");
    if (data.cols() < 2)
        throw InvalidData("center: need at least 2 samples");
    Vector mean = data.rowwise().mean();
    Matrix centered = data.colwise() - mean;
    return {std::move(centered), std::move(mean)};
}

WhiteningResult whiten(const Matrix& centered) {
    const Eigen::Index m = centered.rows();
    const Eigen::Index n = centered.cols();
    if (n < 2) throw InvalidData("whiten: need at least 2 samples");
    Matrix cov = centered * centered.transpose() / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    const Vector& evals = eig.eigenvalues();
    const double emax = evals(m - 1);
    if (emax <= 0.0 || evals(0) <= kRankTol * emax)
        throw RankDeficient("whiten: sample covariance is rank deficient");
    Matrix transform =
        evals.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    WhiteningResult result;
    result.whitened = transform * centered;
    result.mean = Vector::Zero(m);
    result.transform = std::move(transform);
    return result;
}

Matrix sym_decorrelate(const Matrix& W) {
    const Eigen::Index m = W.rows();
    Matrix gram = W * W.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Vector& evals = eig.eigenvalues();
    const double emax = evals(m - 1);
    if (emax <= 0.0 || evals(0) <= kRankTol * emax)
        throw RankDeficient("sym_decorrelate: W W^T is rank deficient");
    Matrix inv_sqrt = eig.eigenvectors() *
                      evals.cwiseSqrt().cwiseInverse().asDiagonal() *
                      eig.eigenvectors().transpose();
    return inv_sqrt * W;
}

Matrix random_orthonormal(int m, std::uint64_t seed) {
    if (m < 2) throw InvalidDimension("random_orthonormal: m must be >= 2");
    Rng rng(seed);
    for (;;) {
        Matrix g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g(i, j) = rng.normal();
        try {
            return sym_decorrelate(g);
        } catch (const RankDeficient&) {
            // zero-probability event; redraw
        }
    }
}

} // namespace bica
