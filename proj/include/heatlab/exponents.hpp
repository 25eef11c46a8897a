// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_EXPONENTS_HPP
#define HEATLAB_EXPONENTS_HPP

#include <cmath>

#include "heatlab/errors.hpp"

namespace heatlab {

/// Hardy constant -(N-2)^2/4, the borderline inverse-square coupling.
inline double lambda_star(int dim) {
    const double m = static_cast<double>(dim - 2);
    return -0.25 * m * m;
}

/// Roots a_minus <= a_plus of a^2 + (N-2)a - lambda = 0, the exponents of
/// the power solutions r^{a} of the Euler ODE with potential lambda/r^2.
struct Exponents {
    double a_plus;
    double a_minus;
    double discriminant; // (N-2)^2 + 4*lambda
    double sigma;        // -a_plus
};

inline Exponents exponents(int dim, double lambda) {
    const double ls = lambda_star(dim);
    if (lambda < ls - 1e-12) {
        throw validation_error("supercritical inverse-square coefficient: lambda < lambda_*");
    }
    const double m = static_cast<double>(dim - 2);
    const double disc = std::max(m * m + 4.0 * lambda, 0.0);
    const double root = std::sqrt(disc);
    Exponents e;
    e.a_plus = 0.5 * (-m + root);
    e.a_minus = 0.5 * (-m - root);
    e.discriminant = disc;
    e.sigma = -e.a_plus;
    return e;
}

} // namespace heatlab

#endif
