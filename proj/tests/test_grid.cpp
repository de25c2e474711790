#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bica/grid.hpp"
#include "bica/rng.hpp"

using namespace bica;
using Eigen::VectorXd;

TEST_CASE("build_grid: two-point case") {
    VectorXd s(2);
    s << 0.0, 1.0;
    Grid g = build_grid(s, 2);
    CHECK(g.values(0) == 0.0);
    CHECK(g.values(1) == 1.0);
    CHECK(g.step == doctest::Approx(1.0));
    CHECK(g.freqs(0) == doctest::Approx(0.5));
    CHECK(g.freqs(1) == doctest::Approx(0.5));
}

TEST_CASE("build_grid: standard normal histogram (direct oracle)") {
    const int n = 10000, L = 500;
    Rng rng(42);
    VectorXd s(n);
    for (int j = 0; j < n; ++j) s(j) = rng.normal();
    Grid g = build_grid(s, L);

    CHECK(std::abs(g.freqs.sum() - 1.0) < 1e-12);
    CHECK((g.freqs.array() >= 0.0).all());

    // grid mean within ~one step of the sample mean
    const double grid_mean = g.values.dot(g.freqs);
    CHECK(std::abs(grid_mean - s.mean()) < 1.1 * g.step);

    // independent direct count per bin
    for (int l : {0, 100, 250, 499}) {
        int count = 0;
        const double lo = g.values(l) - g.step / 2;
        const double hi = g.values(l) + g.step / 2;
        for (int j = 0; j < n; ++j) {
            const bool inside =
                (l == 0) ? (s(j) <= hi) : (s(j) > lo && s(j) <= hi);
            if (inside) ++count;
        }
        CHECK(g.freqs(l) == doctest::Approx(double(count) / n).epsilon(1e-12));
    }
}

TEST_CASE("build_grid: constant samples are degenerate") {
    VectorXd s = VectorXd::Constant(50, 3.0);
    CHECK_THROWS_AS(build_grid(s, 10), DegenerateSample);
}

TEST_CASE("build_grid: grid too small") {
    VectorXd s(3);
    s << 0, 1, 2;
    CHECK_THROWS_AS(build_grid(s, 1), InvalidGrid);
}

TEST_CASE("build_grid: equally spaced values spanning [min, max]") {
    Rng rng(7);
    VectorXd s(1000);
    for (int j = 0; j < 1000; ++j) s(j) = 2.0 * rng.uniform() - 3.0;
    Grid g = build_grid(s, 101);
    CHECK(g.values(0) == s.minCoeff());
    CHECK(g.values(100) == s.maxCoeff());
    for (int l = 0; l + 1 < 101; ++l)
        CHECK(std::abs(g.values(l + 1) - g.values(l) - g.step) < 1e-12);
}

TEST_CASE("build_grid: permutation invariance") {
    Rng rng(13);
    std::vector<double> raw(500);
    for (auto& v : raw) v = rng.normal();
    VectorXd a = Eigen::Map<VectorXd>(raw.data(), 500);
    std::reverse(raw.begin(), raw.end());
    std::swap(raw[3], raw[250]);
    VectorXd b = Eigen::Map<VectorXd>(raw.data(), 500);

    Grid ga = build_grid(a, 64);
    Grid gb = build_grid(b, 64);
    CHECK((ga.values - gb.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ga.freqs - gb.freqs).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("build_grid: quantization error bound on the mean") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        VectorXd s(400);
        for (int j = 0; j < 400; ++j) s(j) = rng.normal() * (1.0 + trial);
        Grid g = build_grid(s, 50);
        CHECK(std::abs(g.values.dot(g.freqs) - s.mean()) <= g.step / 2 + 1e-12);
    }
}
