// SPDX-License-Identifier: Apache-2.0
#include "heatlab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "heatlab/quadrature.hpp"

namespace heatlab {

double sphere_area(int dim) {
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double ball_volume(int dim) {
    return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

WeightProfile WeightProfile::from_profile(const HarmonicProfile& profile,
                                          const PotentialSpec& spec) {
    if ((profile.values <= 0.0).any()) {
        throw validation_error("WeightProfile: harmonic profile must be strictly positive");
    }
    WeightProfile w;
    w.base = profile;
    w.dim = spec.dim;
    w.near_zero_power = 2.0 * profile.near_zero_exponent;
    const Exponents ex = exponents(spec.dim, spec.lambda2);
    double p_hi = 2.0 * ex.a_plus, p_lo = 2.0 * ex.a_minus;
    if (profile.tail) {
        // keep only branches actually present in the tail
        const double r = profile.grid.r_max;
        const double half = -0.5 * (spec.dim - 2.0);
        const double m1 = profile.tail->log_branch
                              ? std::abs(profile.tail->c1) * std::pow(r, half) * std::log(r)
                              : std::abs(profile.tail->c1) * std::pow(r, ex.a_plus);
        const double m2 = profile.tail->log_branch
                              ? std::abs(profile.tail->c2) * std::pow(r, half)
                              : std::abs(profile.tail->c2) * std::pow(r, ex.a_minus);
        const double top = std::max(m1, m2);
        const bool has1 = m1 > 1e-8 * top;
        const bool has2 = m2 > 1e-8 * top;
        const double e1 = profile.tail->log_branch ? 2.0 * half : 2.0 * ex.a_plus;
        const double e2 = profile.tail->log_branch ? 2.0 * half : 2.0 * ex.a_minus;
        if (has1 && !has2) p_lo = p_hi = e1;
        else if (has2 && !has1) p_lo = p_hi = e2;
        else { p_lo = std::min(e1, e2); p_hi = std::max(e1, e2); }
    }
    w.tail_power_bounds = {p_lo, p_hi};
    return w;
}

double WeightProfile::eval(double rho) const {
    const double u = base.interp(rho);
    return u * u;
}

A2Screen a2_quick_test(const WeightProfile& weight, int dim) {
    const double n = static_cast<double>(dim);
    const double eps = 1e-9;
    const double powers[3] = {weight.near_zero_power, weight.tail_power_bounds.first,
                              weight.tail_power_bounds.second};
    bool all_inside = true;
    for (double p : powers) {
        // the power criterion is strict (-N < p < N), so the boundary fails
        if (std::abs(p) >= n - eps) return A2Screen::NotA2;
        if (std::abs(p) > n - 1e-3) all_inside = false;
    }
    return all_inside ? A2Screen::IsA2 : A2Screen::Inconclusive;
}

namespace {

// Area of the part of the sphere |z| = rho inside B(x, r), |x| = d.
double cap_area(double rho, double d, double r, int dim) {
    if (rho <= 0.0) return 0.0;
    if (rho >= d + r || rho <= d - r) return 0.0;
    if (rho <= r - d) return sphere_area(dim) * std::pow(rho, dim - 1);
    double c0 = (rho * rho + d * d - r * r) / (2.0 * rho * d);
    c0 = std::clamp(c0, -1.0, 1.0);
    const double gamma0 = std::acos(c0);
    const double ang = adaptive_simpson(
        [dim](double g) { return std::pow(std::sin(g), dim - 2); }, 0.0, gamma0, 1e-8);
    return sphere_area(dim - 1) * std::pow(rho, dim - 1) * ang;
}

// 8-point Gauss-Legendre on [a, b].
double gauss8(const std::function<double(double)>& f, double a, double b) {
    static const double xg[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double wg[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        s += wg[i] * (f(c - h * xg[i]) + f(c + h * xg[i]));
    }
    return s * h;
}

} // namespace

double radial_ball_integral(const std::function<double(double)>& f, int dim,
                            double center_distance, double r,
                            const RadialGrid& grid) {
    const double d = center_distance;
    if (!(r > 0.0) || d < 0.0) throw validation_error("radial_ball_integral: bad ball");
    const double lo = std::max(0.0, d - r);
    const double hi = d + r;
    if (hi > grid.r_max * (1.0 + 1e-12)) {
        throw validation_error("radial_ball_integral: ball shadow exceeds grid r_max");
    }
    // breakpoints: shadow edges, the full-sphere/cap transition, grid nodes
    std::vector<double> bp;
    bp.push_back(lo);
    if (d < r && r - d > lo && r - d < hi) bp.push_back(r - d);
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.nodes[i];
        if (x > lo && x < hi) bp.push_back(x);
    }
    bp.push_back(hi);
    std::sort(bp.begin(), bp.end());

    auto integrand = [&](double rho) { return f(rho) * cap_area(rho, d, r, dim); };
    double total = 0.0;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
        if (bp[i + 1] - bp[i] < 1e-300) continue;
        total += gauss8(integrand, bp[i], bp[i + 1]);
    }
    return total;
}

double ball_mass(const WeightProfile& weight, double center_distance, double r) {
    return radial_ball_integral([&](double rho) { return weight.eval(rho); },
                                weight.dim, center_distance, r, weight.base.grid);
}

A2Estimate a2_constant(const WeightProfile& weight,
                       const std::vector<std::pair<double, double>>& ball_samples) {
    A2Estimate est;
    for (const auto& [d, r] : ball_samples) {
        double m, minv;
        try {
            m = ball_mass(weight, d, r);
            minv = radial_ball_integral(
                [&](double rho) { return 1.0 / weight.eval(rho); }, weight.dim, d, r,
                weight.base.grid);
        } catch (const validation_error&) {
            ++est.skipped;
            continue;
        }
        const double vol = ball_volume(weight.dim) * std::pow(r, weight.dim);
        est.value = std::max(est.value, (m / vol) * (minv / vol));
    }
    return est;
}

} // namespace heatlab
