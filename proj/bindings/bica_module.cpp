#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bica/density.hpp"
#include "bica/driver.hpp"
#include "bica/metrics.hpp"
#include "bica/synth.hpp"

namespace py = pybind11;
using namespace bica;

namespace {

std::vector<SourceSpec> parse_kinds(const std::vector<std::string>& kinds) {
    std::vector<SourceSpec> specs;
    specs.reserve(kinds.size());
    for (const auto& k : kinds) specs.push_back(SourceSpec::parse(k));
    return specs;
}

BicaConfig make_config(int grid_size, double df, int boost_iters, int maxit,
                       std::uint64_t seed, double tol, int sweeps_per_iter,
                       int threads) {
    BicaConfig c;
    c.grid_size = grid_size;
    c.df = df;
    c.boost_iters = boost_iters;
    c.maxit = maxit;
    c.seed = seed;
    c.tol = tol;
    c.sweeps_per_iter = sweeps_per_iter;
    c.threads = threads;
    return c;
}

} // namespace

PYBIND11_MODULE(_bica, m) {
    m.doc() = "Blind source separation via boosted spline density estimation";

    py::register_exception<Error>(m, "BicaError");

    m.def(
        "separate",
        [](const Matrix& data, int grid_size, double df, int boost_iters,
           int maxit, std::uint64_t seed, double tol, int sweeps_per_iter,
           int threads) {
            const BicaConfig config =
                make_config(grid_size, df, boost_iters, maxit, seed, tol,
                            sweeps_per_iter, threads);
            SeparationResult r;
            {
                py::gil_scoped_release release;
                r = separate(data, config);
            }
            py::dict out;
            out["W"] = r.W;
            out["sources"] = r.sources();
            out["loglik_per_iter"] = r.loglik_per_iter;
            out["iterations_run"] = r.iterations_run;
            out["whitening_transform"] = r.whitening.transform;
            out["mean"] = r.whitening.mean;
            // unmixing in the original (unwhitened) coordinates
            out["W_full"] = Matrix(r.W * r.whitening.transform);
            return out;
        },
        py::arg("data"), py::arg("grid_size") = 500, py::arg("df") = 3.0,
        py::arg("boost_iters") = 5, py::arg("maxit") = 20, py::arg("seed") = 0,
        py::arg("tol") = 1e-8, py::arg("sweeps_per_iter") = 1,
        py::arg("threads") = 1,
        "Separate row-wise mixed signals; returns a dict with the orthonormal "
        "unmixing matrix, estimated sources and the likelihood trace.");

    m.def(
        "likelihood_scan",
        [](const Matrix& data2d, const std::vector<double>& angles_deg,
           int grid_size, double df, int boost_iters) {
            BicaConfig config;
            config.grid_size = grid_size;
            config.df = df;
            config.boost_iters = boost_iters;
            py::gil_scoped_release release;
            return likelihood_scan(data2d, angles_deg, config);
        },
        py::arg("data2d"), py::arg("angles_deg"), py::arg("grid_size") = 500,
        py::arg("df") = 3.0, py::arg("boost_iters") = 5,
        "Total modified log-likelihood of a 2-D mixture at each rotation "
        "angle (degrees); returns a list of (angle, loglik) pairs.");

    m.def("amari", &amari, py::arg("W"), py::arg("W0"),
          "Amari distance between two unmixing matrices (zero iff they agree "
          "up to row permutation and scaling).");

    m.def(
        "sir",
        [](const Matrix& true_sources, const Matrix& estimated) {
            SirReport r = sir(true_sources, estimated);
            return py::make_tuple(r.mean_sir_db, r.per_component_db);
        },
        py::arg("true_sources"), py::arg("estimated"),
        "Signal-to-interference ratio in dB: returns (mean, per-component).");

    m.def(
        "gen_sources",
        [](const std::vector<std::string>& kinds, int num_samples,
           std::uint64_t seed) {
            return gen_sources(parse_kinds(kinds), num_samples, seed);
        },
        py::arg("kinds"), py::arg("num_samples"), py::arg("seed") = 0,
        "Deterministic synthetic sources, one row per kind in "
        "{uniform, gmm, laplace, student_t, two_point}.");

    m.def("mix", &mix, py::arg("sources"), py::arg("A"),
          "Mix sources: x = A s.");
    m.def("bench3x3_mixing", &bench3x3_mixing,
          "The fixed 3x3 benchmark mixing matrix.");
    m.def("random_mixing", &random_mixing, py::arg("m"), py::arg("seed"),
          "Random orthonormal mixing matrix (deterministic per seed).");

    m.def(
        "whiten",
        [](const Matrix& data) {
            auto [centered, mean] = center(data);
            WhiteningResult w = whiten(centered);
            return py::make_tuple(w.whitened, mean, w.transform);
        },
        py::arg("data"),
        "Center and whiten row-wise data; returns (whitened, mean, transform).");

    m.def("sym_decorrelate", &sym_decorrelate, py::arg("W"),
          "Symmetric decorrelation (W W^T)^{-1/2} W.");
    m.def("random_orthonormal", &random_orthonormal, py::arg("m"),
          py::arg("seed"), "Deterministic random orthonormal matrix.");

    m.def(
        "boost_density",
        [](const Eigen::VectorXd& samples, int grid_size, int boost_iters,
           double df) {
            BoostResult r = boost_density(samples, grid_size, boost_iters, df);
            Eigen::VectorXd f(r.grid.size);
            for (int l = 0; l < r.grid.size; ++l) {
                double fl, dfl, d2fl;
                r.model.eval(r.grid.values(l), fl, dfl, d2fl);
                f(l) = fl;
            }
            py::dict out;
            out["grid"] = r.grid.values;
            out["log_density"] = f;
            out["loglik_trace"] = r.loglik_trace;
            out["partition"] = partition_sum(r.model, r.grid);
            return out;
        },
        py::arg("samples"), py::arg("grid_size") = 500,
        py::arg("boost_iters") = 5, py::arg("df") = 3.0,
        "Boosted log-density estimate of one source evaluated on its grid.");
}
