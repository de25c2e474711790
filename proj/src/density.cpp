#include "bica/density.hpp"

#include <cmath>
#include <limits>

namespace bica {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178; // ln(2*pi)/2

double trace_value(const Eigen::VectorXd& f_grid, const Grid& grid) {
    // Eq-(8)-style surrogate on the grid; +inf treated as divergence upstream
    double value = 0.0;
    for (int l = 0; l < grid.size; ++l) {
        if (f_grid(l) > kLogDensityClamp)
            return std::numeric_limits<double>::infinity();
        value += grid.freqs(l) * f_grid(l) - grid.step * std::exp(f_grid(l));
    }
    return value;
}

} // namespace

void SourceDensityModel::eval(double t, double& f, double& df, double& d2f) const {
    f = -0.5 * t * t - kHalfLog2Pi;
    df = -t;
    d2f = -1.0;
    for (const auto& learner : learners_) {
        double b, db, d2b;
        learner.eval(t, b, db, d2b);
        f += b;
        df += db;
        d2f += d2b;
    }
}

double SourceDensityModel::log_density(double t) const {
    double f, df, d2f;
    eval(t, f, df, d2f);
    return f;
}

double modified_loglik(const SourceDensityModel& model, const Grid& grid) {
    double value = 0.0;
    for (int l = 0; l < grid.size; ++l) {
        const double f = model.log_density(grid.values(l));
        if (f > kLogDensityClamp)
            throw ModelDiverged("modified_loglik: log-density exceeds overflow clamp");
        value += grid.freqs(l) * f - grid.step * std::exp(f);
    }
    return value;
}

double partition_sum(const SourceDensityModel& model, const Grid& grid) {
    double sum = 0.0;
    for (int l = 0; l < grid.size; ++l) {
        const double f = model.log_density(grid.values(l));
        if (f > kLogDensityClamp)
            throw ModelDiverged("partition_sum: log-density exceeds overflow clamp");
        sum += grid.step * std::exp(f);
    }
    return sum;
}

BoostResult boost_density(const Eigen::VectorXd& samples, int grid_size,
                          int boost_iters, double df_target) {
    if (boost_iters < 0)
        throw InvalidData("boost_density: negative boosting iterations");

    BoostResult result;
    result.grid = build_grid(samples, grid_size);
    const Grid& grid = result.grid;
    const int L = grid.size;

    // current f at the grid points, starting from the Gaussian base
    Eigen::VectorXd f_grid(L);
    for (int l = 0; l < L; ++l)
        f_grid(l) = -0.5 * grid.values(l) * grid.values(l) - kHalfLog2Pi;

    double ll = trace_value(f_grid, grid);
    result.loglik_trace.push_back(ll);

    for (int k = 1; k <= boost_iters; ++k) {
        Eigen::VectorXd weights = grid.step * f_grid.array().min(kLogDensityClamp).exp();
        const double floor = 1e-10 * weights.maxCoeff();
        weights = weights.cwiseMax(floor);
        const Eigen::VectorXd responses =
            (grid.freqs - weights).array() / weights.array();

        const auto [lambda, df_actual] =
            calibrate_lambda(grid.values, weights, df_target);
        SplineWeakLearner learner = fit_weighted_spline(
            grid.values, weights, responses, lambda, df_actual);

        // step-halving: keep the modified log-likelihood nondecreasing
        double factor = 1.0;
        bool accepted = false;
        for (int attempt = 0; attempt <= 10; ++attempt) {
            Eigen::VectorXd f_new = f_grid + factor * learner.values();
            const double ll_new = trace_value(f_new, grid);
            if (std::isfinite(ll_new) && ll_new >= ll) {
                f_grid = std::move(f_new);
                ll = ll_new;
                result.model.add_learner(factor == 1.0 ? std::move(learner)
                                                       : learner.scaled(factor));
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        (void)accepted; // a dropped learner leaves f unchanged
        result.loglik_trace.push_back(ll);
    }
    return result;
}

} // namespace bica
