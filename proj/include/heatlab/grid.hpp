// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_GRID_HPP
#define HEATLAB_GRID_HPP

#include <Eigen/Dense>
#include <cmath>

#include "heatlab/errors.hpp"

namespace heatlab {

/// Strictly increasing log-spaced radial grid on [r_min, r_max].
struct RadialGrid {
    Eigen::ArrayXd nodes;
    double r_min = 0.0;
    double r_max = 0.0;
    int points_per_decade = 0;

    int size() const { return static_cast<int>(nodes.size()); }
    /// Uniform spacing in log r.
    double log_step() const { return std::log(nodes[1] / nodes[0]); }

    /// Largest index i with nodes[i] <= r (clamped to valid range).
    int index_below(double r) const {
        const double h = log_step();
        int i = static_cast<int>(std::floor(std::log(r / r_min) / h));
        if (i < 0) i = 0;
        if (i > size() - 2) i = size() - 2;
        return i;
    }
};

inline RadialGrid make_grid(double r_min, double r_max, int points_per_decade) {
    if (!(r_min > 0.0) || !(r_max > r_min) || points_per_decade < 2) {
        throw validation_error("make_grid: require 0 < r_min < r_max and points_per_decade >= 2");
    }
    const double decades = std::log10(r_max / r_min);
    const int n = static_cast<int>(std::lround(decades * points_per_decade)) + 1;
    RadialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.points_per_decade = points_per_decade;
    g.nodes.resize(n);
    const double lmin = std::log(r_min);
    const double lmax = std::log(r_max);
    for (int i = 0; i < n; ++i) {
        const double x = lmin + (lmax - lmin) * static_cast<double>(i) / (n - 1);
        g.nodes[i] = std::exp(x);
    }
    g.nodes[0] = r_min;
    g.nodes[n - 1] = r_max;
    return g;
}

} // namespace heatlab

#endif
