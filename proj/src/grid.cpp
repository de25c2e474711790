#include "bica/grid.hpp"

#include <algorithm>
#include <cmath>

namespace bica {

Grid build_grid(const Eigen::VectorXd& samples, int num_points) {
    const Eigen::Index n = samples.size();
    if (n < 2) throw InvalidData("build_grid: need at least 2 samples");
    if (!samples.allFinite())
        throw InvalidData("build_grid: non-finite samples");
    if (num_points < 2) throw InvalidGrid("build_grid: grid size must be >= 2");
    const double lo = samples.minCoeff();
    const double hi = samples.maxCoeff();
    if (!(hi > lo)) throw DegenerateSample("build_grid: zero sample range");

    Grid grid;
    grid.size = num_points;
    grid.step = (hi - lo) / static_cast<double>(num_points - 1);
    grid.values.resize(num_points);
    for (int l = 0; l < num_points; ++l)
        grid.values(l) = lo + grid.step * static_cast<double>(l);
    grid.values(num_points - 1) = hi;

    grid.freqs = Eigen::VectorXd::Zero(num_points);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        // bin l covers (values[l] - step/2, values[l] + step/2]
        int l = static_cast<int>(std::ceil((samples(j) - lo) / grid.step - 0.5));
        l = std::clamp(l, 0, num_points - 1);
        grid.freqs(l) += inv_n;
    }
    return grid;
}

} // namespace bica
