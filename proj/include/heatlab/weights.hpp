// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_WEIGHTS_HPP
#define HEATLAB_WEIGHTS_HPP

#include <functional>
#include <utility>
#include <vector>

#include "heatlab/harmonic.hpp"

namespace heatlab {

/// Radial weight omega = U^2 built from a harmonic profile, with the power
/// data needed for the A2 screen (2 A+(lambda1) near zero, the pair of tail
/// powers of omega present in the tail fit).
struct WeightProfile {
    HarmonicProfile base;
    int dim = 3;
    double near_zero_power = 0.0;
    std::pair<double, double> tail_power_bounds{0.0, 0.0};

    static WeightProfile from_profile(const HarmonicProfile& profile,
                                      const PotentialSpec& spec);

    /// omega(rho) = U(rho)^2, power-law closed below r_min.
    double eval(double rho) const;
};

enum class A2Screen { IsA2, NotA2, Inconclusive };

/// Power-criterion screen: |x|^p is A2 on R^N iff -N < p < N; applied to the
/// near-zero power and both tail powers of omega.
A2Screen a2_quick_test(const WeightProfile& weight, int dim);

/// N-dimensional integral of a radial function over the ball with center at
/// distance `center_distance` from the origin and radius r, reduced to a 1-D
/// integral of f(rho) * (sphere cap area). Throws when the radial shadow
/// exceeds the grid.
double radial_ball_integral(const std::function<double(double)>& f, int dim,
                            double center_distance, double r,
                            const RadialGrid& grid);

/// omega(B(x, r)).
double ball_mass(const WeightProfile& weight, double center_distance, double r);

struct A2Estimate {
    double value = 1.0; // max over sampled balls of (avg omega)(avg 1/omega)
    int skipped = 0;    // balls whose shadow left the grid
};

/// Sampled lower bound on the A2 constant [omega].
A2Estimate a2_constant(const WeightProfile& weight,
                       const std::vector<std::pair<double, double>>& ball_samples);

/// Surface area of the unit sphere S^{N-1}.
double sphere_area(int dim);
/// Volume of the unit ball in R^N.
double ball_volume(int dim);

} // namespace heatlab

#endif
