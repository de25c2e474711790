#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bica/errors.hpp"
#include "bica/matrix_core.hpp"

namespace bica {

// Synthetic source family. All families are zero-mean unit-variance by
// construction; with `standardized` set the empirical mean/variance are
// additionally removed, making the sample moments exact.
struct SourceSpec {
    enum class Kind { Uniform, Gmm, Laplace, StudentT, TwoPoint };

    Kind kind = Kind::Uniform;
    bool standardized = true;

    // Gmm parameters (weights must sum to 1)
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> sds;

    // StudentT degrees of freedom
    double nu = 5.0;

    static SourceSpec uniform() { return {}; }
    static SourceSpec gmm(std::vector<double> w, std::vector<double> mu,
                          std::vector<double> sd);
    static SourceSpec laplace();
    static SourceSpec student_t(double nu);
    static SourceSpec two_point();

    // Parses "uniform", "gmm", "laplace", "student_t", "two_point".
    static SourceSpec parse(const std::string& name);
};

// One i.i.d. row per spec, deterministic for a fixed seed.
Matrix gen_sources(const std::vector<SourceSpec>& specs, int num_samples,
                   std::uint64_t seed);

// x = A s. Throws RankDeficient for singular A.
Matrix mix(const Matrix& sources, const Matrix& A);

// The fixed 3x3 mixing matrix [0.8,0.3,-0.3; 0.2,-0.8,0.7; 0.3,0.2,0.3],
// parsed column-wise.
Matrix bench3x3_mixing();

// Random mixing matrix with orthonormal rows (deterministic per seed).
Matrix random_mixing(int m, std::uint64_t seed);

} // namespace bica
