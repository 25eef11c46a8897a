// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_HARMONIC_HPP
#define HEATLAB_HARMONIC_HPP

#include <Eigen/Dense>
#include <optional>

#include "heatlab/grid.hpp"
#include "heatlab/potential.hpp"

namespace heatlab {

/// Tail decomposition U(r) ~ c1 b+(r) + c2 b-(r) on a far window, with
/// b+- = r^{A+-(lambda2)}, or {r^{-(N-2)/2} log r, r^{-(N-2)/2}} at the
/// Hardy borderline.
struct TailFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double residual = 0.0; // relative L2 misfit on the window
    bool log_branch = false;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// The distinguished solution of U'' + (N-1)/r U' - V U = 0 with leading
/// coefficient 1 at r -> 0 (U ~ r^{A+(lambda1)}), sampled on a log grid.
struct HarmonicProfile {
    RadialGrid grid;
    Eigen::ArrayXd values;
    Eigen::ArrayXd derivative;
    double near_zero_exponent = 0.0;  // fitted; should match A+(lambda1)
    double correction_exponent = 0.0; // fitted theta' of the O(r^{theta'}) correction
    std::optional<TailFit> tail;

    /// Log-log interpolation (power law per cell), with power-law closure
    /// below r_min; requires a positive profile. r above r_max throws.
    double interp(double r) const;
};

/// Output of the successive-approximation construction on (0, r_cut].
struct NearZeroSolution {
    Eigen::ArrayXd r;          // grid nodes up to r_cut
    Eigen::ArrayXd values;     // U on those nodes
    Eigen::ArrayXd derivative; // U' on those nodes
    int iterations = 0;
    double last_increment = 0.0;
};

/// Fixed point of the integral map U <- u+ (1 + F[U]) near r = 0, computed
/// by nested log-grid quadrature. Errors when the iteration does not
/// contract (r_cut too large) or max_iter is exceeded.
NearZeroSolution picard_near_zero(const PotentialSpec& spec, const RadialGrid& grid,
                                  double r_cut, double tol = 1e-13, int max_iter = 60);

/// Continues the near-zero solution to r_max by 4th-order A-stable Gauss
/// collocation in log r with local error control, then fits the near-zero
/// and correction exponents.
HarmonicProfile extend_outward(const NearZeroSolution& partial, const PotentialSpec& spec,
                               const RadialGrid& grid);

struct PipelineOptions {
    double r_cut = 1e-2;
    double picard_tol = 1e-13;
    int picard_max_iter = 60;
    double tail_window_factor = 100.0; // window [r_max/factor, r_max]
    bool fit_tail = true;
};

/// Full pipeline: Picard near zero (shrinking r_cut on non-contraction),
/// outward continuation, exponent fits, tail fit when the profile stays
/// positive on the window.
HarmonicProfile build_profile(const PotentialSpec& spec, const RadialGrid& grid,
                              const PipelineOptions& opts = {});

/// Kelvin transform w(r) -> s^{2-N} w(1/s) on the reflected grid; swaps the
/// roles of the exponents at 0 and infinity.
HarmonicProfile kelvin(const HarmonicProfile& profile, int dim);

/// Least-squares tail decomposition on [r_lo, r_hi].
TailFit fit_tail(const HarmonicProfile& profile, const PotentialSpec& spec,
                 double r_lo, double r_hi);

/// F[U](r) = U(r) int_0^r s^{1-N} U(s)^{-2} (int_0^s t^{N-1} U(t)^2 dt) ds,
/// satisfying Delta F - V F = U. Requires U > 0 on the grid and
/// near-zero exponent > -N/2.
Eigen::ArrayXd f_of_u(const HarmonicProfile& profile, int dim);

/// First sign change of U, refined by log-linear interpolation.
std::optional<double> positivity_scan(const HarmonicProfile& profile);

/// Centered finite-difference residual of the ODE in log r at interior
/// nodes (diagnostic; scaled like U).
Eigen::ArrayXd ode_residual(const HarmonicProfile& profile, const PotentialSpec& spec);

} // namespace heatlab

#endif
