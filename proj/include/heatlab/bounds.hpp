// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_BOUNDS_HPP
#define HEATLAB_BOUNDS_HPP

#include <functional>
#include <vector>

#include "heatlab/criticality.hpp"
#include "heatlab/heatkernel.hpp"

namespace heatlab {

enum class EnvelopeKind {
    TwoSided,      // C U(x)U(y) / sqrt(w(Bx)) sqrt(w(By)) exp(-d^2/(C t))
    Global,        // C t^{-N/2} U(min(|x|,s))U(min(|y|,s))/U(s)^2 exp(-d^2/(C t)), s = sqrt(t)
    Polynomial,    // same display, for polynomially bounded harmonic U, V >= 0
    GaussianRate,  // C U U / sqrt(w) sqrt(w) exp(-d^2/((4+eps) t))
};

struct EnvelopeIngredients {
    std::function<double(double)> U;
    std::function<double(double, double)> ball_mass; // (center distance, radius)
};

struct Envelope {
    EnvelopeKind kind = EnvelopeKind::Global;
    int dim = 3;
    EnvelopeIngredients ingredients;
    double epsilon = 0.5; // GaussianRate only
};

/// |x - y| from radii and the enclosed angle.
double chord_distance(double rx, double ry, double cos_theta);

/// The envelope formula with the single constant C in both the prefactor and
/// the exponent denominator (GaussianRate keeps the exponent at 4 + eps).
double envelope_eval(const Envelope& env, double rx, double ry, double cos_theta,
                     double t, double C);

/// Hypothesis guard for the Global envelope: refuses critical operators with
/// A-(lambda2) <= -N/2.
void check_global_envelope_hypothesis(const CriticalityReport& report,
                                      const PotentialSpec& spec);

enum class FitSide { Upper, Lower };

struct FitReport {
    FitSide side = FitSide::Upper;
    double fitted_constant = 0.0;
    KernelSample worst_sample;
    double ratio_min = 0.0;   // kernel / envelope at the fitted constant
    double ratio_max = 0.0;
    double ratio_median = 0.0;
};

/// Minimal upper / maximal lower constant by monotone bisection over C.
FitReport fit_constant(const KernelSlice& slice, const Envelope& env, FitSide side,
                       double c_lo, double c_hi, double rel_tol = 1e-9);

struct RateReport {
    double slope = 0.0;       // of -log(p * normalizer) against |x-y|^2/t
    bool passed = false;      // slope >= 1/(4+eps)
    int used_samples = 0;
};

/// Far-field Gaussian decay rate; uses samples with |x-y|^2/t in [10, 100]
/// and both radii >= sqrt(t).
RateReport gaussian_rate(const KernelSlice& slice, const EnvelopeIngredients& ing,
                         double eps);

/// zeta(s) = s^{gamma1} [log(c + s)]^{gamma2} on (T, infinity).
struct ZetaSpec {
    double gamma1 = -1.0;
    double gamma2 = 0.0;
    double c = 2.0;
    double T = 0.0;

    double eval(double s) const;
    double deriv(double s) const;
};

/// Smallest kappa with -s zeta'(s) <= kappa zeta(s) on (T, infinity); errors
/// when zeta is not decreasing there.
double zeta_kappa(const ZetaSpec& zeta);

struct SupersolutionRegion {
    double r_lo = 1e-2;
    double r_hi = 10.0;
    std::vector<double> times;
    double cone_factor = 1.0; // keep r <= cone_factor * sqrt(t); <= 0 disables
};

struct SupersolutionReport {
    double min_residual = 0.0;   // of dt w - Delta w + V w at grid spacing h
    double disc_tol = 0.0;       // Richardson estimate of the h^2 error level
    bool passed = false;         // min_residual >= -disc_tol
    bool w_positive = true;      // w > 0 everywhere on the region
    double min_w = 0.0;
};

/// Checks the supersolution inequality for w = zeta(t)[U - kappa F[U]/t] with
/// the discrete radial Laplacian; the pass tolerance tracks the measured
/// discretization error (Richardson between strides h and 2h).
SupersolutionReport verify_supersolution(const HarmonicProfile& U, const Eigen::ArrayXd& FU,
                                         const ZetaSpec& zeta, double kappa,
                                         const PotentialSpec& spec,
                                         const SupersolutionRegion& region);

/// Caffarelli-Kohn-Nirenberg critical exponent 2(N - 2a)/(N - 2 - 2a);
/// requires N > 2 + 2a.
double ckn_p0(int dim, double alpha);

} // namespace heatlab

#endif
