// SPDX-License-Identifier: Apache-2.0
#include "heatlab/criticality.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace heatlab {

namespace {

double basis_at(double r, double exponent) { return std::pow(r, exponent); }

bool profile_has_zero(const PotentialSpec& spec, const ClassifyOptions& opts) {
    PipelineOptions p = opts.pipeline;
    p.fit_tail = false;
    const HarmonicProfile prof = build_profile(spec, opts.grid, p);
    return positivity_scan(prof).has_value();
}

} // namespace

CriticalityReport classify_operator(const PotentialSpec& spec, const ClassifyOptions& opts) {
    const AsymptoticsReport val = validate_asymptotics(spec, opts.asym_tol);
    if (!val.passed) throw validation_error(val.message);

    PipelineOptions p = opts.pipeline;
    p.fit_tail = false;
    const HarmonicProfile prof = build_profile(spec, opts.grid, p);

    CriticalityReport rep;
    if (auto zero = positivity_scan(prof)) {
        rep.verdict = Verdict::Supercritical;
        rep.tail_case = TailCase::None;
        rep.first_zero = zero;
        return rep;
    }

    const double r_hi = opts.grid.r_max;
    const double r_lo = r_hi / opts.pipeline.tail_window_factor;
    TailFit fit = fit_tail(prof, spec, r_lo, r_hi);
    if (fit.residual > 1e-3) {
        std::ostringstream oss;
        oss << "unclassifiable at this r_max: tail fit residual " << fit.residual
            << "; enlarge the domain";
        throw convergence_error(oss.str());
    }

    const Exponents ex = exponents(spec.dim, spec.lambda2);
    const double half = -0.5 * (static_cast<double>(spec.dim) - 2.0);
    double b1, b2;
    if (fit.log_branch) {
        b1 = basis_at(r_hi, half) * std::log(r_hi);
        b2 = basis_at(r_hi, half);
    } else {
        b1 = basis_at(r_hi, ex.a_plus);
        b2 = basis_at(r_hi, ex.a_minus);
    }
    const double grow = std::abs(fit.c1) * b1;
    const double decay = std::abs(fit.c2) * b2;
    rep.branch_ratio = decay == 0.0 ? std::numeric_limits<double>::infinity() : grow / decay;
    rep.tail = fit;
    if (rep.branch_ratio > opts.kappa_sep) {
        rep.verdict = Verdict::Subcritical;
        rep.tail_case = fit.log_branch ? TailCase::C : TailCase::A;
    } else {
        rep.verdict = Verdict::Critical;
        rep.tail_case = fit.log_branch ? TailCase::D : TailCase::B;
    }
    return rep;
}

MuStarResult find_mu_star(const PotentialSpec& spec, double mu_lo, double mu_hi,
                          double tol, const ClassifyOptions& opts) {
    if (spec.family != ProfileFamily::InverseSquareBump) {
        throw validation_error("find_mu_star: spec must carry a bump profile");
    }
    if (!(mu_lo < mu_hi) || !(tol > 0.0)) {
        throw validation_error("find_mu_star: need mu_lo < mu_hi and tol > 0");
    }
    MuStarResult res;
    res.verdict_lo = classify_operator(spec.bump_amplitude(-mu_lo), opts);
    res.verdict_hi = classify_operator(spec.bump_amplitude(-mu_hi), opts);
    if (res.verdict_lo.verdict != Verdict::Subcritical ||
        res.verdict_hi.verdict != Verdict::Supercritical) {
        throw validation_error(
            "find_mu_star: bracket endpoints must classify subcritical (lo) and supercritical (hi)");
    }
    res.trace.emplace_back(mu_lo, false);
    res.trace.emplace_back(mu_hi, true);
    double lo = mu_lo, hi = mu_hi;
    int it = 0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const bool zero = profile_has_zero(spec.bump_amplitude(-mid), opts);
        res.trace.emplace_back(mid, zero);
        (zero ? hi : lo) = mid;
        ++it;
    }
    res.mu_star = 0.5 * (lo + hi);
    res.bracket_width = hi - lo;
    res.iterations = it;
    return res;
}

} // namespace heatlab
