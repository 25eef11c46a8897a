// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each check pins the library against independent closed forms (Euler
// exponents, power-law harmonics, Bessel-series kernels, free Gaussians)
// or against refinement/stability studies with fixed tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "heatlab/bounds.hpp"
#include "heatlab/criticality.hpp"
#include "heatlab/harmonic.hpp"
#include "heatlab/heatkernel.hpp"
#include "heatlab/potential.hpp"
#include "heatlab/quadrature.hpp"
#include "heatlab/weights.hpp"

using namespace heatlab;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d (%s): %s  %s\n", idx, name, ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_exponent_algebra() {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dims(2, 10);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const int n = dims(rng);
        const double ls = lambda_star(n);
        const double lambda = ls + lam(rng) * 50.0;
        const auto e = exponents(n, lambda);
        // Vieta: sum of roots -(N-2), product -lambda
        worst = std::max(worst, std::abs(e.a_plus + e.a_minus + (n - 2.0)));
        worst = std::max(worst, std::abs(e.a_plus * e.a_minus + lambda) /
                                    std::max(1.0, std::abs(lambda)));
    }
    bool ok = worst < 1e-12;
    for (int n = 2; n <= 10; ++n) {
        const auto e = exponents(n, lambda_star(n));
        if (e.a_plus != -0.5 * (n - 2.0) || e.a_minus != -0.5 * (n - 2.0)) ok = false;
    }
    report(1, "exponent algebra", ok, fmt("worst identity error %.2e", worst));
}

void criterion_2_harmonic_oracle() {
    const auto grid = make_grid(1e-6, 1e6, 64);
    double worst = 0.0;
    for (double lambda : {-0.2, 0.5, lambda_star(3)}) {
        const auto prof = build_profile(PotentialSpec::pure(3, lambda), grid);
        const double ap = exponents(3, lambda).a_plus;
        for (int i = 0; i < grid.size(); ++i) {
            const double r = grid.nodes[i];
            if (r < 1e-4 || r > 1e4) continue;
            worst = std::max(worst, std::abs(prof.values[i] / std::pow(r, ap) - 1.0));
        }
    }
    const auto flat = build_profile(PotentialSpec::zero(3), grid);
    double worst0 = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        worst0 = std::max(worst0, std::abs(flat.values[i] - 1.0));
    }
    report(2, "harmonic oracle", worst < 1e-6 && worst0 < 1e-10,
           fmt("pure rel err %.2e, flat err %.2e", worst, worst0));
}

PotentialSpec unit_well(double depth, double width = 1e-3) {
    BumpShape shape;
    shape.r_outer = 1.0;
    shape.width = width;
    return PotentialSpec::with_bump(3, 0.0, -depth, shape);
}

void criterion_3_verdicts() {
    ClassifyOptions opts;
    const double qw = M_PI * M_PI / 4.0;
    bool ok = true;
    std::string bad;
    auto expect = [&](const PotentialSpec& s, Verdict v, const char* tag) {
        if (classify_operator(s, opts).verdict != v) {
            ok = false;
            bad += std::string(" ") + tag;
        }
    };
    expect(PotentialSpec::zero(3), Verdict::Subcritical, "zero3");
    expect(PotentialSpec::zero(2), Verdict::Critical, "zero2");
    expect(PotentialSpec::pure(3, lambda_star(3)), Verdict::Critical, "hardy");
    expect(unit_well(0.9 * qw), Verdict::Subcritical, "well0.9");
    expect(unit_well(1.1 * qw), Verdict::Supercritical, "well1.1");
    report(3, "criticality verdicts", ok, ok ? "all five verdicts correct" : "wrong:" + bad);
}

void criterion_4_mu_star() {
    ClassifyOptions opts;
    opts.grid = make_grid(1e-6, 1e4, 64);
    const auto res = find_mu_star(unit_well(1.0), 1.0, 4.0, 5e-3, opts);
    const auto res_half = find_mu_star(unit_well(1.0, 5e-4), 1.0, 4.0, 5e-3, opts);
    const double target = M_PI * M_PI / 4.0;
    const double err = std::abs(res.mu_star - target);
    const double bias = std::abs(res.mu_star - res_half.mu_star);
    report(4, "threshold recovery", err < 1e-2,
           fmt("mu* = %.5f (err %.1e, mollification bias %.1e)", res.mu_star, err, bias));
}

void criterion_5_f_of_u() {
    double worst = 0.0;
    for (double a : {-0.4, 0.0, 0.7}) {
        const double lambda = a * a + a;
        const auto spec = a == 0.0 ? PotentialSpec::zero(3) : PotentialSpec::pure(3, lambda);
        const auto grid = make_grid(1e-6, 1e6, 64);
        const auto prof = build_profile(spec, grid);
        const auto FU = f_of_u(prof, 3);
        for (int i = 0; i < grid.size(); ++i) {
            const double r = grid.nodes[i];
            if (r < 1e-4 || r > 1e4) continue;
            const double exact = std::pow(r, a + 2.0) / (2.0 * (2.0 * a + 3.0));
            worst = std::max(worst, std::abs(FU[i] / exact - 1.0));
        }
    }
    // residual of Laplace(F) - V F = U under refinement at pure lambda = -0.24
    auto residual_max = [&](int ppd) {
        const auto spec = PotentialSpec::pure(3, -0.24);
        const auto grid = make_grid(1e-6, 1e6, ppd);
        const auto prof = build_profile(spec, grid);
        const auto FU = f_of_u(prof, 3);
        const double h = grid.log_step();
        double m = 0.0;
        for (int i = 1; i + 1 < grid.size(); ++i) {
            const double r = grid.nodes[i];
            if (r < 1e-2 || r > 1e2) continue;
            const double fxx = (FU[i + 1] - 2.0 * FU[i] + FU[i - 1]) / (h * h);
            const double fx = (FU[i + 1] - FU[i - 1]) / (2.0 * h);
            const double lap = (fxx + fx) / (r * r);
            const double res = lap - eval(spec, r) * FU[i] - prof.values[i];
            m = std::max(m, std::abs(res / prof.values[i]));
        }
        return m;
    };
    const double r32 = residual_max(32);
    const double r64 = residual_max(64);
    const double order = std::log2(r32 / r64);
    report(5, "F[U] closed form", worst < 1e-6 && order >= 1.9,
           fmt("rel err %.2e, residual order %.2f", worst, order));
}

void criterion_6_kernel_oracle() {
    SolverConfig cfg;
    cfg.grid = make_grid(1e-3, 60.0, 512);
    const std::vector<double> times{0.01, 0.1, 1.0, 10.0};
    const std::vector<double> rs{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    const std::vector<double> rhos{0.3, 1.0, 3.0};
    double worst = 0.0;
    int used = 0;
    for (double lambda : {lambda_star(3), -0.2, 0.0, 1.0}) {
        const auto spec = lambda == 0.0 ? PotentialSpec::zero(3) : PotentialSpec::pure(3, lambda);
        for (double rho : rhos) {
            const auto mk = solve_mode(spec, 0, rho, times, cfg);
            for (size_t k = 0; k < times.size(); ++k) {
                for (double r : rs) {
                    // compare in the near field (kernel >= ~1% of its peak);
                    // deeper tail values fall below the grid solver's relative
                    // accuracy floor and carry no information about the oracle
                    if ((r - rho) * (r - rho) / (4.0 * times[k]) > 5.0) continue;
                    const double exact = oracle_mode(3, lambda, 0, r, rho, times[k]);
                    const double got = mk.at(r, static_cast<int>(k));
                    worst = std::max(worst, std::abs(got / exact - 1.0));
                    ++used;
                }
            }
        }
    }

    // assembled kernel for V = 0 against the free Gaussian at off-axis points
    SolverConfig acfg;
    acfg.grid = make_grid(1e-3, 40.0, 512);
    acfg.l_max = 24;
    const std::vector<double> atimes{0.25, 0.5};
    std::vector<ModeKernel> modes;
    for (int l = 0; l <= acfg.l_max; ++l) {
        modes.push_back(solve_mode(PotentialSpec::zero(3), l, 1.0, atimes, acfg));
    }
    double aworst = 0.0;
    int apts = 0;
    for (size_t k = 0; k < atimes.size(); ++k) {
        for (double r : {0.5, 1.5}) {
            std::vector<double> mv;
            for (const auto& m : modes) mv.push_back(m.at(r, static_cast<int>(k)));
            for (double c : {-0.8, -0.3, 0.2, 0.6, 0.95}) {
                const double d2 = r * r + 1.0 - 2.0 * r * c;
                const double exact =
                    std::pow(4.0 * M_PI * atimes[k], -1.5) * std::exp(-d2 / (4.0 * atimes[k]));
                aworst = std::max(aworst, std::abs(assemble(mv, 3, c).value / exact - 1.0));
                ++apts;
            }
        }
    }
    report(6, "kernel oracle", worst < 1e-3 && aworst < 1e-3 && used >= 50 && apts == 20,
           fmt("mode rel err %.2e (n>=50), assembled rel err %.2e (n=20)", worst, aworst));
}

KernelSlice slab_slice(double lambda) {
    // slab |x|, |y| in [0.05, 20], t in [0.01, 10], 5 angles; keep the samples
    // the mode series can resolve in double precision (>= 1000 of them)
    std::vector<double> radii;
    for (int i = 0; i < 9; ++i) radii.push_back(0.05 * std::pow(400.0, i / 8.0));
    const std::vector<double> angles{-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> times;
    for (int i = 0; i < 8; ++i) times.push_back(0.01 * std::pow(1000.0, i / 7.0));
    KernelSlice slice;
    for (double rx : radii)
        for (double ry : radii)
            for (double c : angles)
                for (double t : times) {
                    if (!series_resolvable(rx, ry, c, t)) continue;
                    KernelSample s;
                    s.rx = rx;
                    s.ry = ry;
                    s.cos_theta = c;
                    s.t = t;
                    s.p = oracle_kernel(3, lambda, rx, ry, c, t);
                    slice.samples.push_back(s);
                }
    return slice;
}

struct TwoSidedFit {
    FitReport upper, lower;
};

TwoSidedFit fit_two_sided(const KernelSlice& slice, const PotentialSpec& spec, int ppd) {
    const auto grid = make_grid(1e-6, 1e6, ppd);
    const auto prof = build_profile(spec, grid);
    const auto weight = WeightProfile::from_profile(prof, spec);
    Envelope env;
    env.dim = 3;
    env.kind = EnvelopeKind::TwoSided;
    // shared_ptr so the lambdas outlive this scope
    auto profp = std::make_shared<HarmonicProfile>(prof);
    auto weightp = std::make_shared<WeightProfile>(weight);
    env.ingredients.U = [profp](double r) { return profp->interp(r); };
    env.ingredients.ball_mass = [weightp](double d, double r) {
        return ball_mass(*weightp, d, r);
    };
    TwoSidedFit f;
    f.upper = fit_constant(slice, env, FitSide::Upper, 1e-4, 1e4);
    f.lower = fit_constant(slice, env, FitSide::Lower, 1e-8, 1e4);
    return f;
}

void criterion_7_two_sided() {
    const auto spec = PotentialSpec::pure(3, -0.2);
    const auto slice = slab_slice(-0.2);
    const auto coarse = fit_two_sided(slice, spec, 32);
    const auto fine = fit_two_sided(slice, spec, 64);
    const double spread_c = coarse.upper.ratio_max / coarse.upper.ratio_min;
    const double spread_f = fine.upper.ratio_max / fine.upper.ratio_min;
    const double change = std::abs(spread_f / spread_c - 1.0);
    const bool ok = slice.samples.size() >= 1000 && coarse.upper.fitted_constant > 0.0 &&
                    coarse.lower.fitted_constant > 0.0 && fine.upper.fitted_constant > 0.0 &&
                    fine.lower.fitted_constant > 0.0 && change < 0.10;
    report(7, "two-sided envelope", ok,
           fmt("C_up %.3g, C_low %.3g, spread change %.1f%%", fine.upper.fitted_constant,
               fine.lower.fitted_constant, 100.0 * change));
}

void criterion_8_global_envelope() {
    // algebraic identity of the two envelope displays for pure potentials
    const auto ex = exponents(3, -0.2);
    Envelope env;
    env.dim = 3;
    env.kind = EnvelopeKind::Global;
    env.ingredients.U = [&](double r) { return std::pow(r, ex.a_plus); };
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> logu(-2.0, 2.0), cosd(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double rx = std::pow(10.0, logu(rng)), ry = std::pow(10.0, logu(rng));
        const double t = std::pow(10.0, logu(rng)), c = cosd(rng);
        const double C = 0.5 + (k % 5);
        const double d = chord_distance(rx, ry, c);
        const double s = std::sqrt(t);
        const double display = C * std::pow(t, -1.5 + ex.sigma) *
                               std::pow(std::min(rx, s), -ex.sigma) *
                               std::pow(std::min(ry, s), -ex.sigma) *
                               std::exp(-d * d / (C * t));
        worst = std::max(worst, std::abs(envelope_eval(env, rx, ry, c, t, C) / display - 1.0));
    }

    // critical borderline case passes the hypothesis guard and admits an upper fit
    const auto spec = PotentialSpec::pure(3, lambda_star(3));
    ClassifyOptions copts;
    const auto verdict = classify_operator(spec, copts);
    bool guard_ok = verdict.verdict == Verdict::Critical;
    try {
        check_global_envelope_hypothesis(verdict, spec);
    } catch (const std::exception&) {
        guard_ok = false;
    }
    // and the guard does refuse a critical report with a steep decay branch
    bool guard_refuses = false;
    try {
        CriticalityReport crit;
        crit.verdict = Verdict::Critical;
        check_global_envelope_hypothesis(crit, PotentialSpec::pure(3, 0.75));
    } catch (const validation_error&) {
        guard_refuses = true;
    }

    Envelope genv;
    genv.dim = 3;
    genv.kind = EnvelopeKind::Global;
    genv.ingredients.U = [](double r) { return std::pow(r, -0.5); };
    const auto slice = slab_slice(lambda_star(3));
    const auto fit = fit_constant(slice, genv, FitSide::Upper, 1e-4, 1e6);
    report(8, "global envelope", worst < 1e-12 && guard_ok && guard_refuses &&
                                     fit.fitted_constant > 0.0,
           fmt("identity err %.2e, critical upper C %.3g", worst, fit.fitted_constant));
}

void criterion_9_gaussian_rate() {
    auto make_far_slice = [&](double lambda, double r0) {
        KernelSlice slice;
        const double t = 0.04;
        for (int k = 0; k < 16; ++k) {
            const double u = 10.5 + 89.5 * k / 15.0;
            KernelSample s;
            s.rx = r0;
            s.ry = r0 + std::sqrt(u * t);
            s.cos_theta = 1.0;
            s.t = t;
            s.p = oracle_kernel(3, lambda, s.rx, s.ry, 1.0, t);
            slice.samples.push_back(s);
        }
        return slice;
    };
    EnvelopeIngredients free_ing;
    free_ing.U = [](double) { return 1.0; };
    free_ing.ball_mass = [](double, double r) { return ball_volume(3) * r * r * r; };
    const auto free_rate = gaussian_rate(make_far_slice(0.0, 1.0), free_ing, 0.5);

    const auto spec = PotentialSpec::pure(3, -0.2);
    const auto prof = build_profile(spec, make_grid(1e-6, 1e2, 32));
    const auto weight = WeightProfile::from_profile(prof, spec);
    EnvelopeIngredients ing;
    ing.U = [&](double r) { return prof.interp(r); };
    ing.ball_mass = [&](double d, double r) { return ball_mass(weight, d, r); };
    const auto rate = gaussian_rate(make_far_slice(-0.2, 0.8), ing, 0.5);

    const bool ok = std::abs(free_rate.slope - 0.25) < 0.0025 && free_rate.passed &&
                    rate.passed && rate.slope >= 1.0 / 4.5;
    report(9, "gaussian rate", ok,
           fmt("free slope %.4f, coupled slope %.4f (threshold %.4f)", free_rate.slope,
               rate.slope, 1.0 / 4.5));
}

void criterion_10_supersolution() {
    bool all_pass = true, undersized_fails = false;
    std::string detail;
    const auto grid = make_grid(1e-6, 1e6, 48);
    std::vector<PotentialSpec> specs{PotentialSpec::pure(3, -0.2), PotentialSpec::pure(3, 0.5),
                                     PotentialSpec::blended(3, -0.1, 0.5, 1.0)};
    for (const auto& spec : specs) {
        const auto prof = build_profile(spec, grid);
        const auto FU = f_of_u(prof, 3);
        const double d = exponents(3, spec.lambda2).a_plus;
        ZetaSpec zeta{-(3.0 + d) / 2.0, 0.0, 2.0, 0.0};
        const double kappa = zeta_kappa(zeta);
        SupersolutionRegion region;
        region.r_lo = 1e-2;
        region.r_hi = 10.0;
        region.times = {1.0, 4.0, 16.0, 64.0};
        region.cone_factor = 1.0;
        const auto rep = verify_supersolution(prof, FU, zeta, kappa, spec, region);
        if (!(rep.passed && rep.w_positive)) all_pass = false;
        const auto bad = verify_supersolution(prof, FU, zeta, 0.2 * kappa, spec, region);
        if (!bad.passed) undersized_fails = true;
        detail += fmt(" %.1e", rep.min_residual);
    }
    report(10, "supersolution", all_pass && undersized_fails,
           "min residuals" + detail + (undersized_fails ? ", undersized kappa flagged" : ""));
}

void criterion_11_weighted_conservation() {
    const double ap = exponents(3, -0.2).a_plus;
    auto U = [ap](double r) { return std::pow(r, ap); };
    const auto grid = make_grid(1e-5, 100.0, 1024);
    double worst = 0.0;
    for (double t : {0.1, 1.0}) {
        for (double r : {0.2, 0.5, 1.0, 2.0, 5.0}) {
            auto p0 = [&](double rho) { return oracle_mode(3, -0.2, 0, r, rho, t); };
            worst = std::max(worst,
                             std::abs(weighted_conservation(p0, U, 3, r, grid) - 1.0));
        }
    }
    report(11, "weighted conservation", worst < 1e-4, fmt("worst deviation %.2e", worst));
}

void criterion_12_ckn() {
    bool ok = ckn_p0(3, 0.0) == 6.0;
    bool threw = false;
    try {
        ckn_p0(3, 0.5);
    } catch (const validation_error&) {
        threw = true;
    }
    bool threw2 = false;
    try {
        ckn_p0(2, 0.0);
    } catch (const validation_error&) {
        threw2 = true;
    }
    report(12, "CKN exponent", ok && threw && threw2,
           fmt("p0(3,0) = %.1f, domain guard active", ckn_p0(3, 0.0)));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_exponent_algebra();
    criterion_2_harmonic_oracle();
    criterion_3_verdicts();
    criterion_4_mu_star();
    criterion_5_f_of_u();
    criterion_6_kernel_oracle();
    criterion_7_two_sided();
    criterion_8_global_envelope();
    criterion_9_gaussian_rate();
    criterion_10_supersolution();
    criterion_11_weighted_conservation();
    criterion_12_ckn();
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("%d of 12 criteria passed in %.1f s\n", 12 - g_failures, dt.count());
    return g_failures == 0 ? 0 : 1;
}
