// SPDX-License-Identifier: Apache-2.0
#include "heatlab/quadrature.hpp"

#include <cmath>
#include <limits>

namespace heatlab {

namespace {

// Integral of a power law through (r0,g0), (r1,g1) over [r0,r1].
// g(t) = g0 (t/r0)^p with p = log(g1/g0)/log(r1/r0).
double power_cell(double r0, double g0, double r1, double g1) {
    if (g0 == 0.0 && g1 == 0.0) return 0.0;
    const bool same_sign = (g0 > 0.0 && g1 > 0.0) || (g0 < 0.0 && g1 < 0.0);
    if (!same_sign) {
        return 0.5 * (g0 + g1) * (r1 - r0); // trapezoid fallback
    }
    const double p = std::log(g1 / g0) / std::log(r1 / r0);
    if (std::abs(p + 1.0) < 1e-10) {
        return g0 * r0 * std::log(r1 / r0);
    }
    return (g1 * r1 - g0 * r0) / (p + 1.0);
}

} // namespace

Eigen::ArrayXd cumulative_log_integral(const Eigen::ArrayXd& r,
                                       const Eigen::ArrayXd& g,
                                       double closure_exponent,
                                       bool include_closure) {
    const int n = static_cast<int>(r.size());
    Eigen::ArrayXd out(n);
    double acc = 0.0;
    if (include_closure && g[0] != 0.0 && closure_exponent > -1.0) {
        acc = g[0] * r[0] / (closure_exponent + 1.0);
    }
    out[0] = acc;
    for (int i = 1; i < n; ++i) {
        acc += power_cell(r[i - 1], g[i - 1], r[i], g[i]);
        out[i] = acc;
    }
    return out;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Coarse magnitude estimate sets the absolute tolerance scale.
    double scale = std::abs(whole);
    if (scale == 0.0) scale = (std::abs(fa) + std::abs(fm) + std::abs(fb)) * std::abs(b - a);
    if (scale == 0.0) scale = std::numeric_limits<double>::min();
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

} // namespace heatlab
