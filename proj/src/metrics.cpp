#include "bica/metrics.hpp"

#include <cmath>
#include <limits>

namespace bica {

double amari(const Matrix& W, const Matrix& W0) {
    const Eigen::Index m = W.rows();
    if (W0.rows() != m || W0.cols() != m || W.cols() != m)
        throw InvalidData("amari: shape mismatch");
    // rows are normalized first so the metric is invariant to row scaling of
    // either argument; a no-op for the orthonormal matrices produced here
    auto normalize_rows = [m](const Matrix& a) {
        Matrix out = a;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double norm = out.row(i).norm();
            if (norm <= 0.0 || !std::isfinite(norm))
                throw RankDeficient("amari: zero row");
            out.row(i) /= norm;
        }
        return out;
    };
    Eigen::FullPivLU<Matrix> lu(normalize_rows(W0));
    if (!lu.isInvertible())
        throw RankDeficient("amari: reference matrix is singular");
    const Matrix r = (normalize_rows(W) * lu.inverse()).cwiseAbs();

    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        total += r.row(i).sum() / r.row(i).maxCoeff() - 1.0;
    for (Eigen::Index j = 0; j < m; ++j)
        total += r.col(j).sum() / r.col(j).maxCoeff() - 1.0;
    return total / (2.0 * static_cast<double>(m));
}

std::vector<int> min_cost_assignment(const Matrix& cost) {
    // shortest augmenting path with potentials (1-based internals)
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) assignment[p[j] - 1] = j - 1;
    return assignment;
}

SirReport sir(const Matrix& true_sources, const Matrix& estimated) {
    const Eigen::Index m = true_sources.rows();
    const Eigen::Index n = true_sources.cols();
    if (estimated.rows() != m || estimated.cols() != n)
        throw InvalidData("sir: shape mismatch");
    if (n < 2) throw InvalidData("sir: need at least 2 samples");

    auto standardize = [&](const Matrix& x) {
        Matrix z = x.colwise() - Vector(x.rowwise().mean());
        for (Eigen::Index i = 0; i < m; ++i) {
            const double sd = std::sqrt(z.row(i).squaredNorm() /
                                        static_cast<double>(n));
            if (sd <= 0.0 || !std::isfinite(sd))
                throw DegenerateSignal("sir: zero-variance component");
            z.row(i) /= sd;
        }
        return z;
    };
    const Matrix s = standardize(true_sources);
    const Matrix y = standardize(estimated);

    const Matrix corr = (s * y.transpose() / static_cast<double>(n)).cwiseAbs();
    const std::vector<int> match = min_cost_assignment(-corr);

    SirReport report;
    report.per_component_db.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double rho2 = corr(i, match[i]) * corr(i, match[i]);
        rho2 = std::min(rho2, 1.0 - 1e-16);
        const double db = 10.0 * std::log10(rho2 / (1.0 - rho2));
        report.per_component_db[i] = std::min(db, kSirCapDb);
        report.mean_sir_db += report.per_component_db[i];
    }
    report.mean_sir_db /= static_cast<double>(m);
    return report;
}

} // namespace bica
