#include <doctest.h>

#include <cmath>

#include "bica/fixed_point.hpp"
#include "bica/metrics.hpp"
#include "bica/rng.hpp"
#include "bica/synth.hpp"

using namespace bica;

namespace {

Matrix whitened_sources(const std::vector<SourceSpec>& specs, int n,
                        std::uint64_t seed, const Matrix& A) {
    Matrix mixed = mix(gen_sources(specs, n, seed), A);
    auto [centered, mean] = center(mixed);
    return whiten(centered).whitened;
}

double orthonormality_error(const Matrix& W) {
    return (W * W.transpose() - Matrix::Identity(W.rows(), W.rows()))
        .cwiseAbs()
        .maxCoeff();
}

} // namespace

TEST_CASE("contrast functions: G0 and G1 values") {
    double g, dg;
    ContrastFunction::g0().eval(2.0, g, dg);
    CHECK(g == doctest::Approx(8.0));
    CHECK(dg == doctest::Approx(12.0));
    ContrastFunction::g1().eval(0.5, g, dg);
    CHECK(g == doctest::Approx(std::tanh(0.5)));
    CHECK(dg == doctest::Approx(1.0 - std::tanh(0.5) * std::tanh(0.5)));
}

TEST_CASE("fixed_point_update: M = 0 Gaussian contrast degenerates") {
    // f' = -y, f'' = -1: the update cancels exactly when (1/N) sum x x^T = I,
    // so rescale the (N-1)-normalized whitened data accordingly
    const int n = 5000;
    Matrix x = whitened_sources({SourceSpec::uniform(), SourceSpec::uniform()},
                                n, 3, random_mixing(2, 3));
    x *= std::sqrt(double(n) / double(n - 1));
    SourceDensityModel gaussian;
    std::vector<SourceDensityModel> models(2, gaussian);
    std::vector<ContrastFunction> contrasts = {
        ContrastFunction::boosted(&models[0]),
        ContrastFunction::boosted(&models[1])};
    Matrix W = random_orthonormal(2, 5);
    CHECK_THROWS_AS(fixed_point_update(W, x, contrasts), DegenerateUpdate);
}

TEST_CASE("fixed_point_update: true unmixing of two-point sources is a fixed "
          "point under G0") {
    // exact symmetric two-point sources have kurtosis != 0 and are already
    // white, so W = I is the true unmixing in whitened space
    const int n = 4096;
    Matrix s(2, n);
    for (int j = 0; j < n; ++j) {
        s(0, j) = (j & 1) ? 1.0 : -1.0;
        s(1, j) = (j & 2) ? 1.0 : -1.0;
    }
    std::vector<ContrastFunction> contrasts = {ContrastFunction::g0(),
                                               ContrastFunction::g0()};
    Matrix W = Matrix::Identity(2, 2);
    Matrix W_new = fixed_point_update(W, s, contrasts);
    // fixed point up to row signs
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(std::abs(W_new.row(i).dot(W.row(i))) - 1.0) < 1e-6);
}

TEST_CASE("fixed_point_update: output is always orthonormal") {
    Matrix x = whitened_sources({SourceSpec::uniform(), SourceSpec::laplace(),
                                 SourceSpec::two_point()},
                                2000, 9, random_mixing(3, 9));
    std::vector<ContrastFunction> contrasts = {ContrastFunction::g0(),
                                               ContrastFunction::g1(),
                                               ContrastFunction::g0()};
    Matrix W = random_orthonormal(3, 1);
    for (int it = 0; it < 5; ++it) {
        W = fixed_point_update(W, x, contrasts);
        CHECK(orthonormality_error(W) <= 1e-10);
    }
}

TEST_CASE("fixed_point_update: row-permutation equivariance") {
    Matrix x = whitened_sources({SourceSpec::uniform(), SourceSpec::uniform()},
                                3000, 13, random_mixing(2, 13));
    std::vector<ContrastFunction> contrasts = {ContrastFunction::g1(),
                                               ContrastFunction::g1()};
    Matrix W = random_orthonormal(2, 2);
    Matrix P(2, 2);
    P << 0, 1, 1, 0;

    Matrix out = fixed_point_update(W, x, contrasts);
    Matrix out_permuted = fixed_point_update(Matrix(P * W), x, contrasts);
    CHECK((out_permuted - P * out).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("convergence_gap: invariant to row sign flips") {
    Matrix a = random_orthonormal(3, 21);
    Matrix b = random_orthonormal(3, 22);
    Matrix flip = Matrix::Identity(3, 3);
    flip(1, 1) = -1.0;
    CHECK(convergence_gap(a, b) ==
          doctest::Approx(convergence_gap(Matrix(flip * a), b)).epsilon(1e-14));
}

TEST_CASE("fastica_baseline: separates two uniforms with G0") {
    std::vector<double> scores;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Matrix A = random_mixing(2, seed * 7 + 1);
        Matrix s = gen_sources({SourceSpec::uniform(), SourceSpec::uniform()},
                               10000, seed);
        Matrix x = mix(s, A);
        auto [centered, mean] = center(x);
        WhiteningResult wr = whiten(centered);
        Matrix W = fastica_baseline(wr.whitened, ContrastFunction::Kind::G0,
                                    20, seed);
        // compare in the original space: W_full = W * transform vs A^{-1}
        scores.push_back(100.0 * amari(W * wr.transform, Matrix(A.inverse())));
    }
    std::sort(scores.begin(), scores.end());
    CHECK(scores[scores.size() / 2] < 5.0);
}

TEST_CASE("fastica_baseline: Gaussian-only sources terminate at maxit") {
    Rng rng(31);
    Matrix s(2, 5000);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 5000; ++j) s(i, j) = rng.normal();
    auto [centered, mean] = center(s);
    WhiteningResult wr = whiten(centered);
    Matrix W = fastica_baseline(wr.whitened, ContrastFunction::Kind::G1, 20, 1);
    CHECK((W * W.transpose() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff()
          <= 1e-10);
}

TEST_CASE("fastica_baseline: already-separated input converges immediately") {
    Matrix s = gen_sources({SourceSpec::uniform(), SourceSpec::two_point()},
                           10000, 5);
    auto [centered, mean] = center(s);
    WhiteningResult wr = whiten(centered);
    // residual after one update from a near-solution start is tiny
    std::vector<ContrastFunction> contrasts = {ContrastFunction::g0(),
                                               ContrastFunction::g0()};
    Matrix W0 = Matrix::Identity(2, 2);
    Matrix W1 = fixed_point_update(W0, wr.whitened, contrasts);
    Matrix W2 = fixed_point_update(W1, wr.whitened, contrasts);
    CHECK(convergence_gap(W2, W1) < 1e-4);
}
