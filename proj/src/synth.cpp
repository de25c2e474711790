#include "bica/synth.hpp"

#include <cmath>

#include "bica/rng.hpp"

namespace bica {

namespace {

void validate(const SourceSpec& spec) {
    if (spec.kind == SourceSpec::Kind::Gmm) {
        if (spec.weights.empty() || spec.weights.size() != spec.means.size() ||
            spec.weights.size() != spec.sds.size())
            throw InvalidSpec("gmm: weights/means/sds must have equal nonzero length");
        double total = 0.0;
        for (double w : spec.weights) {
            if (w < 0.0) throw InvalidSpec("gmm: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw InvalidSpec("gmm: weights must sum to 1");
        for (double sd : spec.sds)
            if (sd <= 0.0) throw InvalidSpec("gmm: sds must be positive");
    }
    if (spec.kind == SourceSpec::Kind::StudentT && spec.nu <= 2.0)
        throw InvalidSpec("student_t: nu must exceed 2 for finite variance");
}

double draw(const SourceSpec& spec, Rng& rng) {
    using Kind = SourceSpec::Kind;
    switch (spec.kind) {
    case Kind::Uniform: {
        const double half = std::sqrt(3.0); // unit variance
        return half * (2.0 * rng.uniform() - 1.0);
    }
    case Kind::Gmm: {
        double u = rng.uniform();
        size_t c = 0;
        while (c + 1 < spec.weights.size() && u >= spec.weights[c]) {
            u -= spec.weights[c];
            ++c;
        }
        return spec.means[c] + spec.sds[c] * rng.normal();
    }
    case Kind::Laplace: {
        const double u = rng.uniform() - 0.5;
        const double b = 1.0 / std::sqrt(2.0); // unit variance
        return -b * std::copysign(std::log(1.0 - 2.0 * std::abs(u)), u);
    }
    case Kind::StudentT: {
        const double z = rng.normal();
        const double chi2 = 2.0 * rng.gamma(spec.nu / 2.0);
        const double t = z / std::sqrt(chi2 / spec.nu);
        return t * std::sqrt((spec.nu - 2.0) / spec.nu); // unit variance
    }
    case Kind::TwoPoint:
        return rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    throw InvalidSpec("unknown source kind");
}

} // namespace

SourceSpec SourceSpec::gmm(std::vector<double> w, std::vector<double> mu,
                           std::vector<double> sd) {
    SourceSpec spec;
    spec.kind = Kind::Gmm;
    spec.weights = std::move(w);
    spec.means = std::move(mu);
    spec.sds = std::move(sd);
    return spec;
}

SourceSpec SourceSpec::laplace() {
    SourceSpec spec;
    spec.kind = Kind::Laplace;
    return spec;
}

SourceSpec SourceSpec::student_t(double nu) {
    SourceSpec spec;
    spec.kind = Kind::StudentT;
    spec.nu = nu;
    return spec;
}

SourceSpec SourceSpec::two_point() {
    SourceSpec spec;
    spec.kind = Kind::TwoPoint;
    return spec;
}

SourceSpec SourceSpec::parse(const std::string& name) {
    if (name == "uniform") return uniform();
    if (name == "laplace") return laplace();
    if (name == "student_t") return student_t(5.0);
    if (name == "two_point") return two_point();
    if (name == "gmm")
        return gmm({0.5, 0.5}, {-1.0, 1.0}, {0.3, 0.3});
    throw InvalidSpec("unknown source kind: " + name);
}

Matrix gen_sources(const std::vector<SourceSpec>& specs, int num_samples,
                   std::uint64_t seed) {
    if (num_samples < 100)
        throw InvalidData("gen_sources: need at least 100 samples");
    if (specs.empty()) throw InvalidSpec("gen_sources: no specs");
    for (const auto& spec : specs) validate(spec);

    const int m = static_cast<int>(specs.size());
    Matrix sources(m, num_samples);
    for (int i = 0; i < m; ++i) {
        Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i));
        for (int j = 0; j < num_samples; ++j) sources(i, j) = draw(specs[i], rng);
        if (specs[i].standardized) {
            const double mean = sources.row(i).mean();
            sources.row(i).array() -= mean;
            const double sd = std::sqrt(sources.row(i).squaredNorm() /
                                        static_cast<double>(num_samples - 1));
            if (sd <= 0.0)
                throw DegenerateSignal("gen_sources: constant source draw");
            sources.row(i) /= sd;
        }
    }
    return sources;
}

Matrix mix(const Matrix& sources, const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() != sources.rows())
        throw InvalidData("mix: mixing matrix shape mismatch");
    Eigen::FullPivLU<Matrix> lu(A);
    if (!lu.isInvertible()) throw RankDeficient("mix: singular mixing matrix");
    return A * sources;
}

Matrix bench3x3_mixing() {
    Matrix A(3, 3);
    // column-wise: [0.8,0.3,-0.3; 0.2,-0.8,0.7; 0.3,0.2,0.3]
    A.col(0) << 0.8, 0.3, -0.3;
    A.col(1) << 0.2, -0.8, 0.7;
    A.col(2) << 0.3, 0.2, 0.3;
    return A;
}

Matrix random_mixing(int m, std::uint64_t seed) {
    return random_orthonormal(m, seed ^ 0xa5a5a5a5a5a5a5a5ULL);
}

} // namespace bica
