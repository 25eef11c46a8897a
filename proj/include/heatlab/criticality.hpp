// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_CRITICALITY_HPP
#define HEATLAB_CRITICALITY_HPP

#include <optional>
#include <vector>

#include "heatlab/harmonic.hpp"

namespace heatlab {

enum class Verdict { Subcritical, Critical, Supercritical };

/// Tail case per the classification: (a) subcritical growth branch,
/// (b) critical decay branch, (c) subcritical log branch at the Hardy
/// borderline, (d) critical constant branch; None for supercritical.
enum class TailCase { A, B, C, D, None };

struct CriticalityReport {
    Verdict verdict = Verdict::Subcritical;
    TailCase tail_case = TailCase::None;
    std::optional<TailFit> tail;        // present for sub/critical verdicts
    std::optional<double> first_zero;   // present for supercritical
    double branch_ratio = 0.0;          // |c1| b+(r_max) / |c2| b-(r_max)
};

struct ClassifyOptions {
    RadialGrid grid;
    PipelineOptions pipeline;
    double kappa_sep = 10.0;  // branch separation factor
    double asym_tol = 1e-6;

    ClassifyOptions() : grid(make_grid(1e-6, 1e6, 64)) {}
};

/// Builds U and decides: a sign change means supercritical; otherwise the
/// dominant tail branch decides subcritical vs critical.
CriticalityReport classify_operator(const PotentialSpec& spec,
                                    const ClassifyOptions& opts = {});

struct MuStarResult {
    double mu_star = 0.0;
    double bracket_width = 0.0;
    int iterations = 0;
    CriticalityReport verdict_lo;
    CriticalityReport verdict_hi;
    std::vector<std::pair<double, bool>> trace; // (mu, U has a zero)
};

/// Bisection for the coupling mu* at which H - mu W loses positivity of U.
/// `spec` must carry a bump profile; the bisection varies its amplitude as
/// -mu (the bump acts as the negative perturbation -mu W).
MuStarResult find_mu_star(const PotentialSpec& spec, double mu_lo, double mu_hi,
                          double tol, const ClassifyOptions& opts = {});

} // namespace heatlab

#endif
