// SPDX-License-Identifier: Apache-2.0
#include "heatlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatlab {

double chord_distance(double rx, double ry, double cos_theta) {
    const double d2 = rx * rx + ry * ry - 2.0 * rx * ry * cos_theta;
    return std::sqrt(std::max(d2, 0.0));
}

double envelope_eval(const Envelope& env, double rx, double ry, double cos_theta,
                     double t, double C) {
    if (!(C > 0.0) || !(t > 0.0)) throw validation_error("envelope_eval: need C, t > 0");
    const double d = chord_distance(rx, ry, cos_theta);
    switch (env.kind) {
        case EnvelopeKind::TwoSided: {
            const double mx = env.ingredients.ball_mass(rx, std::sqrt(t));
            const double my = env.ingredients.ball_mass(ry, std::sqrt(t));
            return C * env.ingredients.U(rx) * env.ingredients.U(ry) /
                   std::sqrt(mx * my) * std::exp(-d * d / (C * t));
        }
        case EnvelopeKind::Global:
        case EnvelopeKind::Polynomial: {
            const double s = std::sqrt(t);
            const double num = env.ingredients.U(std::min(rx, s)) *
                               env.ingredients.U(std::min(ry, s));
            const double den = env.ingredients.U(s);
            return C * std::pow(t, -0.5 * env.dim) * num / (den * den) *
                   std::exp(-d * d / (C * t));
        }
        case EnvelopeKind::GaussianRate: {
            const double mx = env.ingredients.ball_mass(rx, std::sqrt(t));
            const double my = env.ingredients.ball_mass(ry, std::sqrt(t));
            return C * env.ingredients.U(rx) * env.ingredients.U(ry) /
                   std::sqrt(mx * my) * std::exp(-d * d / ((4.0 + env.epsilon) * t));
        }
    }
    return 0.0;
}

void check_global_envelope_hypothesis(const CriticalityReport& report,
                                      const PotentialSpec& spec) {
    if (report.verdict == Verdict::Supercritical) {
        throw validation_error("global envelope: operator is supercritical, no bound holds");
    }
    if (report.verdict == Verdict::Critical) {
        const Exponents ex = exponents(spec.dim, spec.lambda2);
        if (ex.a_minus <= -0.5 * spec.dim) {
            std::ostringstream oss;
            oss << "global envelope hypothesis violated for critical operator: A-(lambda2) = "
                << ex.a_minus << " <= -N/2";
            throw validation_error(oss.str());
        }
    }
}

namespace {

bool feasible(const KernelSlice& slice, const Envelope& env, FitSide side, double C) {
    for (const auto& s : slice.samples) {
        const double e = envelope_eval(env, s.rx, s.ry, s.cos_theta, s.t, C);
        if (side == FitSide::Upper ? s.p > e * (1.0 + 1e-12)
                                   : s.p < e * (1.0 - 1e-12)) {
            return false;
        }
    }
    return true;
}

} // namespace

FitReport fit_constant(const KernelSlice& slice, const Envelope& env, FitSide side,
                       double c_lo, double c_hi, double rel_tol) {
    if (slice.samples.empty()) throw validation_error("fit_constant: empty slice");
    for (const auto& s : slice.samples) {
        if (!(s.p > 0.0)) throw validation_error("fit_constant: non-positive kernel sample");
    }
    // envelope increases in C: upper feasibility increases with C, lower decreases
    const bool lo_ok = feasible(slice, env, side, c_lo);
    const bool hi_ok = feasible(slice, env, side, c_hi);
    const bool want_lo = (side == FitSide::Lower);
    if (lo_ok == hi_ok) {
        std::ostringstream oss;
        oss << "fit_constant: bracket [" << c_lo << ", " << c_hi
            << "] does not straddle feasibility on the "
            << (side == FitSide::Upper ? "upper" : "lower") << " side";
        throw validation_error(oss.str());
    }
    if (want_lo != lo_ok) {
        throw validation_error("fit_constant: bracket oriented against the fit monotonicity");
    }
    double lo = c_lo, hi = c_hi;
    while (hi - lo > rel_tol * hi) {
        const double mid = std::sqrt(lo * hi);
        const bool ok = feasible(slice, env, side, mid);
        if (ok == want_lo) lo = mid; else hi = mid;
    }
    FitReport rep;
    rep.side = side;
    rep.fitted_constant = (side == FitSide::Upper) ? hi : lo;

    std::vector<double> ratios;
    ratios.reserve(slice.samples.size());
    double extreme = side == FitSide::Upper ? 0.0 : 1e300;
    for (const auto& s : slice.samples) {
        const double e = envelope_eval(env, s.rx, s.ry, s.cos_theta, s.t, rep.fitted_constant);
        const double ratio = s.p / e;
        ratios.push_back(ratio);
        if ((side == FitSide::Upper && ratio > extreme) ||
            (side == FitSide::Lower && ratio < extreme)) {
            extreme = ratio;
            rep.worst_sample = s;
        }
    }
    std::sort(ratios.begin(), ratios.end());
    rep.ratio_min = ratios.front();
    rep.ratio_max = ratios.back();
    rep.ratio_median = ratios[ratios.size() / 2];
    return rep;
}

RateReport gaussian_rate(const KernelSlice& slice, const EnvelopeIngredients& ing,
                         double eps) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    double umin = 1e300, umax = 0.0;
    for (const auto& s : slice.samples) {
        const double d = chord_distance(s.rx, s.ry, s.cos_theta);
        const double u = d * d / s.t;
        const double rt = std::sqrt(s.t);
        if (u < 10.0 * (1.0 - 1e-9) || u > 100.0 * (1.0 + 1e-9) || s.rx < rt || s.ry < rt) {
            continue;
        }
        const double mx = ing.ball_mass(s.rx, rt);
        const double my = ing.ball_mass(s.ry, rt);
        const double norm = std::sqrt(mx * my) / (ing.U(s.rx) * ing.U(s.ry));
        const double y = -std::log(s.p * norm);
        sx += u; sy += y; sxx += u * u; sxy += u * y;
        ++n;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    if (n < 8 || umax < 8.0 * umin) {
        throw validation_error(
            "gaussian_rate: insufficient far-field coverage (need a decade of |x-y|^2/t above 10)");
    }
    RateReport rep;
    rep.used_samples = n;
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.passed = rep.slope >= 1.0 / (4.0 + eps);
    return rep;
}

double ZetaSpec::eval(double s) const {
    return std::pow(s, gamma1) * std::pow(std::log(c + s), gamma2);
}

double ZetaSpec::deriv(double s) const {
    const double L = std::log(c + s);
    return eval(s) * (gamma1 / s + gamma2 / ((c + s) * L));
}

namespace {

// g(s) = s / ((c+s) log(c+s)); -s zeta'/zeta = -gamma1 - gamma2 g(s)
double g_of(double s, double c) { return s / ((c + s) * std::log(c + s)); }

// golden-section extremum of g over s in (T, inf), searched in log s
std::pair<double, double> g_range(double c, double T) {
    const double lo = std::log(std::max(T, 1e-8));
    const double hi = lo + 40.0; // g -> 0 well before this
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = g_of(std::exp(x1), c), f2 = g_of(std::exp(x2), c);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = g_of(std::exp(x2), c);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = g_of(std::exp(x1), c);
        }
        if (b - a < 1e-12) break;
    }
    const double gmax = std::max({f1, f2, g_of(std::max(T, 1e-8), c)});
    const double gmin = 0.0; // g > 0 with infimum 0 at the ends
    return {gmin, gmax};
}

} // namespace

double zeta_kappa(const ZetaSpec& zeta) {
    if (!(zeta.c > 1.0)) throw validation_error("zeta_kappa: need c > 1");
    if (zeta.gamma2 == 0.0) {
        if (zeta.gamma1 > 0.0) {
            throw validation_error("zeta_kappa: zeta is increasing on (T, infinity)");
        }
        return -zeta.gamma1;
    }
    const auto [gmin, gmax] = g_range(zeta.c, zeta.T);
    // zeta decreasing <=> gamma1 + gamma2 g(s) <= 0 for all s > T
    const double worst = zeta.gamma2 > 0.0 ? zeta.gamma1 + zeta.gamma2 * gmax
                                           : zeta.gamma1 + zeta.gamma2 * gmin;
    if (worst > 1e-14) {
        throw validation_error("zeta_kappa: zeta is not monotone decreasing on (T, infinity)");
    }
    // kappa = sup of -gamma1 - gamma2 g(s)
    const double kappa = zeta.gamma2 > 0.0 ? -zeta.gamma1 - zeta.gamma2 * gmin
                                           : -zeta.gamma1 - zeta.gamma2 * gmax;
    return kappa;
}

namespace {

// residual of dt w - Delta w + V w at node i, time t, with FD stride k
double residual_at(const HarmonicProfile& U, const Eigen::ArrayXd& FU,
                   const ZetaSpec& zeta, double kappa, const PotentialSpec& spec,
                   int i, int k, double t) {
    const double h = U.grid.log_step() * k;
    const double r = U.grid.nodes[i];
    const double dim = static_cast<double>(spec.dim);
    auto lap = [&](const Eigen::ArrayXd& f) {
        const double fxx = (f[i + k] - 2.0 * f[i] + f[i - k]) / (h * h);
        const double fx = (f[i + k] - f[i - k]) / (2.0 * h);
        return (fxx + (dim - 2.0) * fx) / (r * r);
    };
    const double V = eval(spec, r);
    const double z = zeta.eval(t);
    const double zp = zeta.deriv(t);
    const double dtw = zp * (U.values[i] - kappa * FU[i] / t) + z * kappa * FU[i] / (t * t);
    const double spatial = (lap(U.values) - V * U.values[i]) -
                           kappa / t * (lap(FU) - V * FU[i]);
    return dtw - z * spatial;
}

} // namespace

SupersolutionReport verify_supersolution(const HarmonicProfile& U, const Eigen::ArrayXd& FU,
                                         const ZetaSpec& zeta, double kappa,
                                         const PotentialSpec& spec,
                                         const SupersolutionRegion& region) {
    if (region.times.empty()) throw validation_error("verify_supersolution: no times given");
    SupersolutionReport rep;
    rep.min_residual = 1e300;
    rep.min_w = 1e300;
    double max_diff = 0.0;
    const int n = U.grid.size();
    for (double t : region.times) {
        if (t <= zeta.T) continue;
        for (int i = 2; i + 2 < n; ++i) {
            const double r = U.grid.nodes[i];
            if (r < region.r_lo || r > region.r_hi) continue;
            if (region.cone_factor > 0.0 && r > region.cone_factor * std::sqrt(t)) continue;
            const double w = zeta.eval(t) * (U.values[i] - kappa * FU[i] / t);
            rep.min_w = std::min(rep.min_w, w);
            const double r1 = residual_at(U, FU, zeta, kappa, spec, i, 1, t);
            const double r2 = residual_at(U, FU, zeta, kappa, spec, i, 2, t);
            rep.min_residual = std::min(rep.min_residual, r1);
            max_diff = std::max(max_diff, std::abs(r2 - r1));
        }
    }
    if (rep.min_residual == 1e300) {
        throw validation_error("verify_supersolution: region selects no grid points");
    }
    rep.w_positive = rep.min_w > 0.0;
    rep.disc_tol = 2.0 * max_diff / 3.0 + 1e-12; // Richardson h^2 error level, with margin
    rep.passed = rep.min_residual >= -rep.disc_tol;
    return rep;
}

double ckn_p0(int dim, double alpha) {
    if (!(dim > 2.0 + 2.0 * alpha)) {
        throw validation_error("ckn_p0: requires N > 2 + 2*alpha");
    }
    return 2.0 * (dim - 2.0 * alpha) / (dim - 2.0 - 2.0 * alpha);
}

} // namespace heatlab
