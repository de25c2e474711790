#include "bica/driver.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace bica {

namespace {

void validate_config(const BicaConfig& config) {
    if (config.grid_size < 2) throw InvalidGrid("config: grid size must be >= 2");
    if (config.boost_iters < 0) throw InvalidData("config: negative boost iterations");
    if (config.maxit < 1) throw InvalidData("config: maxit must be >= 1");
    if (config.sweeps_per_iter < 1)
        throw InvalidData("config: sweeps_per_iter must be >= 1");
    if (config.threads < 1) throw InvalidData("config: threads must be >= 1");
}

// Runs boost_density for every component at the current W; errors carry the
// offending component index.
std::vector<BoostResult> fit_all_densities(const Matrix& W,
                                           const Matrix& whitened,
                                           const BicaConfig& config) {
    const int m = static_cast<int>(W.rows());
    std::vector<BoostResult> fits(m);
    std::vector<std::exception_ptr> errors(m);

    auto fit_one = [&](int i) {
        try {
            const Eigen::VectorXd projected =
                whitened.transpose() * W.row(i).transpose();
            fits[i] = boost_density(projected, config.grid_size,
                                    config.boost_iters, config.df);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    if (config.threads <= 1 || m == 1) {
        for (int i = 0; i < m; ++i) fit_one(i);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < m; ++i) pool.emplace_back(fit_one, i);
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < m; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const ModelDiverged& e) {
            throw ModelDiverged("component " + std::to_string(i) + ": " + e.what());
        } catch (const DegenerateSample& e) {
            throw DegenerateSample("component " + std::to_string(i) + ": " + e.what());
        } catch (const CalibrationFailed& e) {
            throw CalibrationFailed("component " + std::to_string(i) + ": " + e.what());
        }
    }
    return fits;
}

} // namespace

SeparationResult separate(const Matrix& data, const BicaConfig& config,
                          const IterationObserver& observer) {
    validate_config(config);
    if (!data.allFinite()) throw InvalidData("separate: non-finite input");
    const int m = static_cast<int>(data.rows());
    if (m < 2) throw InvalidDimension("separate: need at least 2 components");

    SeparationResult result;
    auto [centered, mean] = center(data);
    result.whitening = whiten(centered);
    result.whitening.mean = std::move(mean);
    const Matrix& whitened = result.whitening.whitened;

    // The joint likelihood has spurious local maxima (e.g. at 45 degrees
    // between identically distributed bimodal sources), so a single random
    // start can stall far from the optimum. When a start converges before the
    // maxit budget is spent, the remaining iterations fund further seeded
    // starts and the highest-likelihood solution wins. A start that never
    // converges consumes the whole budget, so maxit stays the hard cap on the
    // total number of outer iterations.
    struct Start {
        Matrix W;
        std::vector<SourceDensityModel> models;
        std::vector<double> loglik;
        int iterations = 0;
    };
    Start best;
    int budget = config.maxit;

    for (std::uint64_t attempt = 0; budget > 0; ++attempt) {
        const std::uint64_t start_seed =
            config.seed + attempt * 0x9e3779b97f4a7c15ULL;
        Start run;
        run.W = random_orthonormal(m, start_seed);
        if (observer) observer(0, run.W);

        bool converged = false;
        while (budget > 0 && !converged) {
            std::vector<BoostResult> fits =
                fit_all_densities(run.W, whitened, config);

            double total_ll = 0.0;
            run.models.clear();
            run.models.reserve(m);
            for (auto& fit : fits) {
                total_ll += fit.loglik_trace.back();
                run.models.push_back(std::move(fit.model));
            }
            run.loglik.push_back(total_ll);

            std::vector<ContrastFunction> contrasts;
            contrasts.reserve(m);
            for (const auto& model : run.models)
                contrasts.push_back(ContrastFunction::boosted(&model));

            double gap = 0.0;
            for (int sweep = 0; sweep < config.sweeps_per_iter; ++sweep) {
                Matrix W_new = fixed_point_update(run.W, whitened, contrasts);
                gap = convergence_gap(W_new, run.W);
                run.W = std::move(W_new);
                if (observer) observer(run.iterations + 1, run.W);
            }
            ++run.iterations;
            --budget;
            converged = gap < config.tol;
        }

        if (attempt == 0 || run.loglik.back() > best.loglik.back())
            best = std::move(run);
    }

    result.W = std::move(best.W);
    result.models = std::move(best.models);
    result.loglik_per_iter = std::move(best.loglik);
    result.iterations_run = best.iterations;
    return result;
}

std::vector<std::pair<double, double>>
likelihood_scan(const Matrix& data2d, const std::vector<double>& angles_deg,
                const BicaConfig& config) {
    validate_config(config);
    if (data2d.rows() != 2)
        throw InvalidDimension("likelihood_scan: exactly 2 components required");
    if (!data2d.allFinite()) throw InvalidData("likelihood_scan: non-finite input");

    auto [centered, mean] = center(data2d);
    const WhiteningResult white = whiten(centered);

    std::vector<std::pair<double, double>> curve;
    curve.reserve(angles_deg.size());
    for (double deg : angles_deg) {
        const double t = deg * M_PI / 180.0;
        Matrix W(2, 2);
        W << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        double total = 0.0;
        for (const auto& fit : fit_all_densities(W, white.whitened, config))
            total += fit.loglik_trace.back();
        curve.emplace_back(deg, total);
    }
    return curve;
}

} // namespace bica
