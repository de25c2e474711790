#pragma once

#include <Eigen/Dense>
#include <utility>

#include "bica/errors.hpp"

namespace bica {

// Natural cubic smoothing spline fitted by penalized weighted least squares,
//   sum_l (1/2) w_l (b(x_l) - Y_l)^2 + (lambda/2) integral [b'']^2,
// solved in O(L) through the banded Reinsch system
//   (R + lambda Q^T W^{-1} Q) gamma = Q^T Y,  g = Y - lambda W^{-1} Q gamma,
// which is the stationarity condition (W + lambda K) g = W Y with
// K = Q R^{-1} Q^T the roughness matrix. Outside the knot range the spline
// extends linearly (second derivative identically zero).
class SplineWeakLearner {
public:
    SplineWeakLearner() = default;
    SplineWeakLearner(Eigen::VectorXd knots, Eigen::VectorXd values,
                      Eigen::VectorXd second, double lambda, double df_actual)
        : knots_(std::move(knots)), values_(std::move(values)),
          second_(std::move(second)), lambda_(lambda), df_actual_(df_actual) {}

    // (b, b', b'') at t; piecewise cubic inside the knot range, linear tails.
    void eval(double t, double& b, double& db, double& d2b) const;

    double value_at(double t) const;

    // integral [b'']^2 over the knot range (the tails contribute nothing).
    double roughness() const;

    // Multiplies the spline by a constant (coefficients are linear in it).
    SplineWeakLearner scaled(double factor) const {
        return {knots_, values_ * factor, second_ * factor, lambda_,
                df_actual_};
    }

    const Eigen::VectorXd& knots() const { return knots_; }
    const Eigen::VectorXd& values() const { return values_; }
    const Eigen::VectorXd& second_derivs() const { return second_; }
    double lambda() const { return lambda_; }
    double df_actual() const { return df_actual_; }

private:
    Eigen::VectorXd knots_;  // ascending, length L
    Eigen::VectorXd values_; // fitted values g at the knots
    Eigen::VectorXd second_; // second derivatives, zero at both ends
    double lambda_ = 0.0;
    double df_actual_ = 0.0;
};

// Effective degrees of freedom at a given lambda: trace of the linear
// smoother S = (W + lambda K)^{-1} W, computed exactly in O(L) from the
// central band of the inverse of the Reinsch matrix.
double smoother_df(const Eigen::VectorXd& knots, const Eigen::VectorXd& weights,
                   double lambda);

// Finds lambda with |df(lambda) - df_target| <= 0.01 by bisection on
// log lambda. Returns (lambda, df_actual).
std::pair<double, double> calibrate_lambda(const Eigen::VectorXd& knots,
                                           const Eigen::VectorXd& weights,
                                           double df_target);

SplineWeakLearner fit_weighted_spline(const Eigen::VectorXd& knots,
                                      const Eigen::VectorXd& weights,
                                      const Eigen::VectorXd& responses,
                                      double lambda, double df_actual = 0.0);

} // namespace bica
