// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_HEATKERNEL_HPP
#define HEATLAB_HEATKERNEL_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "heatlab/harmonic.hpp"
#include "heatlab/potential.hpp"

namespace heatlab {

struct SolverConfig {
    RadialGrid grid;
    double dt_ratio = 0.02;     // graded steps dt = ratio * t
    int l_max = 24;
    double source_width = 2.0;  // initial bump width in local grid spacings
    bool richardson = true;     // extrapolate over two source widths

    SolverConfig() : grid(make_grid(1e-4, 40.0, 64)) {}
};

/// Angular barrier of mode l: V(r) + l (l + N - 2) / r^2.
double mode_potential(const PotentialSpec& spec, int l, double r);
/// omega_l = l (l + N - 2).
double mode_shift(int dim, int l);

/// Radial mode kernel p_l(r, rho, t) for one source radius: values[k] is the
/// profile over the grid at times[k]. Normalized so that the zonal assembly
/// p = sum_l p_l Z_l reproduces the kernel; each mode starts from
/// delta(r - rho)/rho^{N-1}, so int p_0 r^{N-1} dr = 1 is the conserved mass
/// for V = 0.
struct ModeKernel {
    int l = 0;
    double source_radius = 0.0;
    std::vector<double> times;
    std::vector<Eigen::ArrayXd> values;
    RadialGrid grid;
    double boundary_leak = 0.0; // max |p_l| seen at the Dirichlet edge

    double at(double r, int time_index) const; // log-linear interpolation
};

/// Crank-Nicolson evolution of the self-adjoint radial operator (weight
/// r^{N-1}) with the regular-branch ghost closure u ~ r^{A+(lambda1+omega_l)}
/// at r_min and Dirichlet at r_max.
ModeKernel solve_mode(const PotentialSpec& spec, int l, double source_radius,
                      const std::vector<double>& times, const SolverConfig& cfg);

/// Exact mode kernel of the pure inverse-square potential:
/// p_l = (r rho)^{-(N-2)/2} (2t)^{-1} exp(-(r-rho)^2 / 4t) [e^{-z} I_{nu_l}(z)],
/// z = r rho / 2t, nu_l = sqrt((N-2)^2/4 + lambda + omega_l).
double oracle_mode(int dim, double lambda, int l, double r, double rho, double t);

/// Zonal harmonic of degree l on S^{N-1} at cos(theta), normalized so that
/// sum_l p_l Z_l reassembles the free Gaussian when lambda = 0.
double zonal_harmonic(int dim, int l, double cos_theta);

struct AssemblyResult {
    double value = 0.0;
    double truncation = 0.0; // last-term relative magnitude
};

/// Zonal summation of mode values (index = l).
AssemblyResult assemble(const std::vector<double>& mode_values, int dim, double cos_theta);

/// Exact kernel for the pure inverse-square potential by the Bessel mode
/// series, adaptively truncated.
double oracle_kernel(int dim, double lambda, double r, double rho, double cos_theta,
                     double t, int l_max = -1);

/// Whether the zonal mode series can resolve p(x,y,t) in double precision.
/// The angular factor exp(-r rho (1 - cos theta) / (2t)) is produced by
/// cancellation across modes, so past ~25 e-folds the assembled sum is
/// roundoff noise; radial tails beyond the representable Gaussian range are
/// also excluded.
bool series_resolvable(double r, double rho, double cos_theta, double t);

/// One assembled sample of p(x, y, t).
struct KernelSample {
    double rx = 0.0;
    double ry = 0.0;
    double cos_theta = 1.0;
    double t = 0.0;
    double p = 0.0;
    double truncation = 0.0;
};

struct KernelSlice {
    std::vector<KernelSample> samples;
};

/// G(x,y,t) = p(x,y,t) / (U(|x|) U(|y|)) applied samplewise.
KernelSlice ground_state_transform(const KernelSlice& slice,
                                   const std::function<double(double)>& U);

/// int G(x, y, t) omega(y) dy = int p_0(r, rho, t) U(rho) rho^{N-1} drho / U(r)
/// for a radial mode-0 kernel; equals 1 for the conserved weighted semigroup.
double weighted_conservation(const std::function<double(double)>& p0_of_rho,
                             const std::function<double(double)>& U, int dim,
                             double r, const RadialGrid& grid);

} // namespace heatlab

#endif
