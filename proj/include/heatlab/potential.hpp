// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_POTENTIAL_HPP
#define HEATLAB_POTENTIAL_HPP

#include <string>

#include "heatlab/exponents.hpp"
#include "heatlab/grid.hpp"

namespace heatlab {

enum class ProfileFamily {
    Zero,              // V = 0
    PureInverseSquare, // V = lambda / r^2
    Blended,           // V = (lambda1 + (lambda2-lambda1) s(r)) / r^2
    InverseSquareBump, // V = lambda / r^2 + mu W(r), W mollified compact step
};

/// Mollified indicator of the annulus/ball [r_inner, r_outer]: 1 on the
/// plateau, cosine ramps of the given width down to 0 at the edges.
struct BumpShape {
    double r_inner = 0.0; // 0 means the bump includes the origin
    double r_outer = 1.0;
    double width = 1e-3;
    double height = 1.0;  // plateau height (the shape is height * mollified step)

    double eval(double r) const;
};

/// Radial potential with declared asymptotic data (N, lambda1, lambda2, theta):
/// r^2 V(r) -> lambda1 as r -> 0 and -> lambda2 as r -> infinity, with rate
/// theta in the sense of power-law decay of the scaled residuals.
struct PotentialSpec {
    int dim = 3;
    ProfileFamily family = ProfileFamily::Zero;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double theta = 1.0;
    double lambda = 0.0;  // pure / bump base coefficient
    double bump_mu = 0.0; // bump amplitude (negative = well)
    BumpShape bump;

    static PotentialSpec zero(int dim);
    static PotentialSpec pure(int dim, double lambda);
    static PotentialSpec blended(int dim, double lambda1, double lambda2, double theta);
    static PotentialSpec with_bump(int dim, double base_lambda, double mu,
                                   const BumpShape& shape, double theta = 1.0);

    /// Copy with a different bump amplitude (used by the mu* bisection).
    PotentialSpec bump_amplitude(double mu) const;
};

/// V(r) for the declared profile.
double eval(const PotentialSpec& spec, double r);

/// V(r) - lambda / r^2.
double residual(const PotentialSpec& spec, double r, double lambda);

struct AsymptoticsReport {
    bool passed = false;
    double near_zero_value = 0.0; // last scaled residual on the r -> 0 probe
    double near_inf_value = 0.0;  // last scaled residual on the r -> inf probe
    std::string message;
};

/// Probes r^{-theta}|r^2 V - lambda1| as r -> 0 and r^theta|r^2 V - lambda2|
/// as r -> infinity on log-spaced grids. Passes when each scaled residual is
/// below tol at the end of the probe, or decays as a clean positive power
/// (the Eq-(1.2)-type hypothesis); stagnation above tol or growth fails.
AsymptoticsReport validate_asymptotics(const PotentialSpec& spec, double tol,
                                       double probe_r_lo = 1e-10, double probe_r_hi = 1e10,
                                       int points_per_decade = 8);

/// Sufficient subcriticality certificate: inf over the grid of r^2 V(r)
/// exceeds lambda_* by a positive margin. false means "inconclusive".
bool hardy_floor(const PotentialSpec& spec, const RadialGrid& grid, double margin = 1e-9);

} // namespace heatlab

#endif
