#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bica/errors.hpp"
#include "bica/grid.hpp"
#include "bica/spline.hpp"

namespace bica {

// Log-density model f(y) = -y^2/2 - ln(2*pi)/2 + sum_k b_k(y): the fixed
// standard-Gaussian base plus the accumulated spline weak learners. The
// model is evaluable with first and second derivatives everywhere.
class SourceDensityModel {
public:
    void eval(double t, double& f, double& df, double& d2f) const;
    double log_density(double t) const;

    void add_learner(SplineWeakLearner learner) {
        learners_.push_back(std::move(learner));
    }
    const std::vector<SplineWeakLearner>& learners() const { return learners_; }
    int num_learners() const { return static_cast<int>(learners_.size()); }

private:
    std::vector<SplineWeakLearner> learners_;
};

struct BoostResult {
    SourceDensityModel model;
    // modified log-likelihood after initialization and after each learner
    std::vector<double> loglik_trace;
    Grid grid;
};

// Boosted nonparametric MLE of one source density. Each iteration performs
// one IRLS step: weights w_l = step * exp(f(y*_l)) (floored), responses
// Y_l = (q_l - w_l)/w_l, then a smoothing-spline fit with lambda calibrated
// to df_target. A step that would decrease the modified log-likelihood is
// halved up to 10 times and dropped if still decreasing.
BoostResult boost_density(const Eigen::VectorXd& samples, int grid_size,
                          int boost_iters, double df_target);

// Modified log-likelihood: sum_l q_l f(y*_l) - step * exp(f(y*_l)).
double modified_loglik(const SourceDensityModel& model, const Grid& grid);

// Discretized partition function sum_l step * exp(f(y*_l)); equals 1 at the
// likelihood optimum. Throws ModelDiverged when f exceeds the overflow clamp.
double partition_sum(const SourceDensityModel& model, const Grid& grid);

// f values above this are treated as divergence rather than saturated.
inline constexpr double kLogDensityClamp = 50.0;

} // namespace bica
