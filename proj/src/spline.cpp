#include "bica/spline.hpp"

#include <algorithm>
#include <cmath>

namespace bica {

namespace {

using Eigen::VectorXd;

void validate_inputs(const VectorXd& knots, const VectorXd& weights) {
    const Eigen::Index n = knots.size();
    if (n < 2) throw InvalidData("spline: need at least 2 knots");
    if (weights.size() != n)
        throw InvalidData("spline: weights/knots length mismatch");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(knots(i + 1) > knots(i)))
            throw InvalidData("spline: knots must be strictly ascending");
    if ((weights.array() <= 0.0).any() || !weights.allFinite())
        throw InvalidData("spline: weights must be positive and finite");
}

// Symmetric positive definite pentadiagonal system, LDL^T factored in place.
struct PentaLDLT {
    VectorXd d;  // pivots
    VectorXd m1; // L(i, i-1), m1(0) unused
    VectorXd m2; // L(i, i-2), m2(0..1) unused

    void factor(const VectorXd& a0, const VectorXd& a1, const VectorXd& a2) {
        const Eigen::Index n = a0.size();
        d.resize(n);
        m1 = VectorXd::Zero(n);
        m2 = VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double li2 = 0.0, li1 = 0.0;
            if (i >= 2) li2 = a2(i - 2) / d(i - 2);
            if (i >= 1) {
                double num = a1(i - 1);
                if (i >= 2) num -= li2 * m1(i - 1) * d(i - 2);
                li1 = num / d(i - 1);
            }
            double di = a0(i);
            if (i >= 1) di -= li1 * li1 * d(i - 1);
            if (i >= 2) di -= li2 * li2 * d(i - 2);
            if (!(di > 0.0))
                throw CalibrationFailed("spline: Reinsch system not positive definite");
            m1(i) = li1;
            m2(i) = li2;
            d(i) = di;
        }
    }

    VectorXd solve(const VectorXd& b) const {
        const Eigen::Index n = d.size();
        VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = b(i);
            if (i >= 1) v -= m1(i) * x(i - 1);
            if (i >= 2) v -= m2(i) * x(i - 2);
            x(i) = v;
        }
        for (Eigen::Index i = 0; i < n; ++i) x(i) /= d(i);
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (i + 1 < n) x(i) -= m1(i + 1) * x(i + 1);
            if (i + 2 < n) x(i) -= m2(i + 2) * x(i + 2);
        }
        return x;
    }

    // Central band of the inverse (Takahashi/Erisman-Tinney recursion);
    // exact for entries inside the factor's band.
    void inverse_band(VectorXd& z0, VectorXd& z1, VectorXd& z2) const {
        const Eigen::Index n = d.size();
        z0 = VectorXd::Zero(n);
        z1 = VectorXd::Zero(n);
        z2 = VectorXd::Zero(n);
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (i + 2 < n)
                z2(i) = -m1(i + 1) * z1(i + 1) - m2(i + 2) * z0(i + 2);
            if (i + 1 < n) {
                z1(i) = -m1(i + 1) * z0(i + 1);
                if (i + 2 < n) z1(i) -= m2(i + 2) * z1(i + 1);
            }
            z0(i) = 1.0 / d(i);
            if (i + 1 < n) z0(i) -= m1(i + 1) * z1(i);
            if (i + 2 < n) z0(i) -= m2(i + 2) * z2(i);
        }
    }
};

// Reinsch-form bands for given knots/weights: R (tridiagonal part of the
// penalty in the second-derivative basis), B = Q^T W^{-1} Q (pentadiagonal)
// and the Q stencil columns q0, q1, q2.
struct ReinschBands {
    VectorXd h;                    // knot spacings, length L-1
    VectorXd q0, q1, q2;           // Q(j, j), Q(j+1, j), Q(j+2, j)
    VectorXd rd, ro;               // R diagonal / off-diagonal
    VectorXd b0, b1, b2;           // bands of B

    ReinschBands(const VectorXd& x, const VectorXd& w) {
        const Eigen::Index L = x.size();
        const Eigen::Index n = L - 2;
        h.resize(L - 1);
        for (Eigen::Index i = 0; i + 1 < L; ++i) h(i) = x(i + 1) - x(i);
        q0.resize(n); q1.resize(n); q2.resize(n);
        rd.resize(n); ro = VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
        for (Eigen::Index j = 0; j < n; ++j) {
            q0(j) = 1.0 / h(j);
            q1(j) = -1.0 / h(j) - 1.0 / h(j + 1);
            q2(j) = 1.0 / h(j + 1);
            rd(j) = (h(j) + h(j + 1)) / 3.0;
            if (j + 1 < n) ro(j) = h(j + 1) / 6.0;
        }
        b0.resize(n);
        b1 = VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
        b2 = VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
        for (Eigen::Index j = 0; j < n; ++j) {
            b0(j) = q0(j) * q0(j) / w(j) + q1(j) * q1(j) / w(j + 1) +
                    q2(j) * q2(j) / w(j + 2);
            if (j + 1 < n)
                b1(j) = q1(j) * q0(j + 1) / w(j + 1) +
                        q2(j) * q1(j + 1) / w(j + 2);
            if (j + 2 < n) b2(j) = q2(j) * q0(j + 2) / w(j + 2);
        }
    }

    void system_bands(double lambda, VectorXd& a0, VectorXd& a1,
                      VectorXd& a2) const {
        a0 = rd + lambda * b0;
        a1 = ro + lambda * b1;
        a2 = lambda * b2;
    }

    VectorXd qt_times(const VectorXd& y) const {
        const Eigen::Index n = q0.size();
        VectorXd r(n);
        for (Eigen::Index j = 0; j < n; ++j)
            r(j) = q0(j) * y(j) + q1(j) * y(j + 1) + q2(j) * y(j + 2);
        return r;
    }

    VectorXd q_times(const VectorXd& gamma) const {
        const Eigen::Index n = q0.size();
        VectorXd r = VectorXd::Zero(n + 2);
        for (Eigen::Index j = 0; j < n; ++j) {
            r(j) += q0(j) * gamma(j);
            r(j + 1) += q1(j) * gamma(j);
            r(j + 2) += q2(j) * gamma(j);
        }
        return r;
    }
};

} // namespace

void SplineWeakLearner::eval(double t, double& b, double& db, double& d2b) const {
    const Eigen::Index L = knots_.size();
    if (L == 0) { b = db = d2b = 0.0; return; }
    if (L == 1) { b = values_(0); db = d2b = 0.0; return; }

    auto slope_at = [&](Eigen::Index i) {
        // derivative at the left end of interval i
        const double hi = knots_(i + 1) - knots_(i);
        return (values_(i + 1) - values_(i)) / hi -
               hi * (2.0 * second_(i) + second_(i + 1)) / 6.0;
    };

    if (t <= knots_(0)) {
        const double s = slope_at(0);
        b = values_(0) + s * (t - knots_(0));
        db = s;
        d2b = 0.0;
        return;
    }
    if (t >= knots_(L - 1)) {
        const Eigen::Index i = L - 2;
        const double hi = knots_(i + 1) - knots_(i);
        const double s_end = (values_(i + 1) - values_(i)) / hi +
                             hi * (second_(i) + 2.0 * second_(i + 1)) / 6.0;
        b = values_(L - 1) + s_end * (t - knots_(L - 1));
        db = s_end;
        d2b = 0.0;
        return;
    }
    const double* begin = knots_.data();
    Eigen::Index i = std::upper_bound(begin, begin + L, t) - begin - 1;
    i = std::clamp<Eigen::Index>(i, 0, L - 2);
    const double hi = knots_(i + 1) - knots_(i);
    const double u = t - knots_(i);
    const double s = slope_at(i);
    const double dm = (second_(i + 1) - second_(i)) / hi;
    b = values_(i) + s * u + 0.5 * second_(i) * u * u + dm * u * u * u / 6.0;
    db = s + second_(i) * u + 0.5 * dm * u * u;
    d2b = second_(i) + dm * u;
}

double SplineWeakLearner::value_at(double t) const {
    double b, db, d2b;
    eval(t, b, db, d2b);
    return b;
}

double SplineWeakLearner::roughness() const {
    const Eigen::Index L = knots_.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < L; ++i) {
        const double hi = knots_(i + 1) - knots_(i);
        const double a = second_(i), c = second_(i + 1);
        total += hi * (a * a + a * c + c * c) / 3.0;
    }
    return total;
}

double smoother_df(const Eigen::VectorXd& knots, const Eigen::VectorXd& weights,
                   double lambda) {
    validate_inputs(knots, weights);
    const Eigen::Index L = knots.size();
    if (L == 2) return 2.0;
    if (lambda < 0.0) throw InvalidData("smoother_df: negative lambda");
    if (lambda == 0.0) return static_cast<double>(L);

    const ReinschBands bands(knots, weights);
    VectorXd a0, a1, a2;
    bands.system_bands(lambda, a0, a1, a2);
    PentaLDLT ldlt;
    ldlt.factor(a0, a1, a2);
    VectorXd z0, z1, z2;
    ldlt.inverse_band(z0, z1, z2);

    const Eigen::Index n = L - 2;
    double trace_ab = z0.dot(bands.b0);
    for (Eigen::Index j = 0; j + 1 < n; ++j) trace_ab += 2.0 * z1(j) * bands.b1(j);
    for (Eigen::Index j = 0; j + 2 < n; ++j) trace_ab += 2.0 * z2(j) * bands.b2(j);
    return static_cast<double>(L) - lambda * trace_ab;
}

std::pair<double, double> calibrate_lambda(const Eigen::VectorXd& knots,
                                           const Eigen::VectorXd& weights,
                                           double df_target) {
    validate_inputs(knots, weights);
    const Eigen::Index L = knots.size();
    if (df_target <= 2.0 || df_target > static_cast<double>(L))
        throw InvalidDf("calibrate_lambda: df_target must be in (2, L]");
    if (df_target == static_cast<double>(L)) return {0.0, df_target};

    const double tol = 0.01;
    // dimensional scale: lambda*K balances W when lambda ~ w * h^3
    const double hbar = (knots(L - 1) - knots(0)) / static_cast<double>(L - 1);
    const double scale = weights.mean() * hbar * hbar * hbar;
    double lo = 1e-12 * scale, hi = 1e12 * scale;

    const double df_lo = smoother_df(knots, weights, lo);
    if (df_lo < df_target - tol)
        throw CalibrationFailed("calibrate_lambda: target df unreachable (too high)");
    if (df_lo <= df_target + tol) return {lo, df_lo};
    const double df_hi = smoother_df(knots, weights, hi);
    if (df_hi > df_target + tol)
        throw CalibrationFailed("calibrate_lambda: target df unreachable (too low)");
    if (df_hi >= df_target - tol) return {hi, df_hi};

    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200; ++it) {
        const double lmid = 0.5 * (llo + lhi);
        const double lam = std::exp(lmid);
        const double df = smoother_df(knots, weights, lam);
        if (std::abs(df - df_target) <= tol) return {lam, df};
        if (df > df_target)
            llo = lmid; // not enough penalty yet
        else
            lhi = lmid;
    }
    throw CalibrationFailed("calibrate_lambda: bisection did not converge");
}

SplineWeakLearner fit_weighted_spline(const Eigen::VectorXd& knots,
                                      const Eigen::VectorXd& weights,
                                      const Eigen::VectorXd& responses,
                                      double lambda, double df_actual) {
    validate_inputs(knots, weights);
    if (responses.size() != knots.size() || !responses.allFinite())
        throw InvalidData("fit_weighted_spline: bad responses");
    if (lambda < 0.0) throw InvalidData("fit_weighted_spline: negative lambda");
    const Eigen::Index L = knots.size();

    if (L == 2) {
        // a natural spline on two knots is the interpolating line
        return {knots, responses, Eigen::VectorXd::Zero(2), lambda, 2.0};
    }

    const ReinschBands bands(knots, weights);
    VectorXd gamma;
    VectorXd g;
    if (lambda == 0.0) {
        g = responses;
        PentaLDLT ldlt;
        VectorXd a2 = VectorXd::Zero(std::max<Eigen::Index>(L - 4, 0));
        ldlt.factor(bands.rd, bands.ro, a2);
        gamma = ldlt.solve(bands.qt_times(responses));
    } else {
        VectorXd a0, a1, a2;
        bands.system_bands(lambda, a0, a1, a2);
        PentaLDLT ldlt;
        ldlt.factor(a0, a1, a2);
        gamma = ldlt.solve(bands.qt_times(responses));
        g = responses - lambda * (bands.q_times(gamma).array() / weights.array()).matrix();
    }

    VectorXd second = VectorXd::Zero(L);
    second.segment(1, L - 2) = gamma;
    return {knots, g, second, lambda, df_actual};
}

} // namespace bica
