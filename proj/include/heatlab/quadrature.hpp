// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_QUADRATURE_HPP
#define HEATLAB_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

namespace heatlab {

/// Cumulative integral I(r_i) = closure + int_{r_0}^{r_i} g(t) dt of samples
/// g on a log-spaced grid. Each cell is integrated with the power-law rule
/// (exact when g is a power of r on the cell); cells where g changes sign or
/// vanishes fall back to the trapezoid. `closure_exponent` p0 closes the
/// missing (0, r_0] segment as g(t) ~ g(r_0) (t/r_0)^{p0}; pass
/// include_closure = false to start the integral at r_0.
Eigen::ArrayXd cumulative_log_integral(const Eigen::ArrayXd& r,
                                       const Eigen::ArrayXd& g,
                                       double closure_exponent,
                                       bool include_closure);

/// Adaptive Simpson quadrature with relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 40);

} // namespace heatlab

#endif
