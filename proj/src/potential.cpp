// SPDX-License-Identifier: Apache-2.0
#include "heatlab/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace heatlab {

namespace {
const double kPi = 3.14159265358979323846;

void check_couplings(int dim, double l1, double l2) {
    const double ls = lambda_star(dim);
    if (dim < 2) throw validation_error("dimension must be >= 2");
    if (l1 < ls - 1e-12 || l2 < ls - 1e-12) {
        throw validation_error("asymptotic coupling below the Hardy constant -(N-2)^2/4");
    }
}

// Smooth switch s with s = O(r^{1.5 theta}) near 0 and 1 - s = O(r^{-1.5 theta})
// near infinity; the margin over theta makes the declared rate hold strictly.
double blend_switch(double r, double theta) {
    const double p = 1.5 * theta;
    const double rp = std::pow(r, p);
    return rp / (1.0 + rp);
}
} // namespace

double BumpShape::eval(double r) const {
    if (r >= r_outer) return 0.0;
    double v = height;
    if (r > r_outer - width) {
        v = 0.5 * (1.0 + std::cos(kPi * (r - (r_outer - width)) / width));
    }
    if (r_inner > 0.0) {
        if (r <= r_inner) return 0.0;
        if (r < r_inner + width) {
            v *= 0.5 * (1.0 - std::cos(kPi * (r - r_inner) / width));
        }
    }
    return v;
}

PotentialSpec PotentialSpec::zero(int dim) {
    check_couplings(dim, 0.0, 0.0);
    PotentialSpec s;
    s.dim = dim;
    s.family = ProfileFamily::Zero;
    return s;
}

PotentialSpec PotentialSpec::pure(int dim, double lambda) {
    check_couplings(dim, lambda, lambda);
    PotentialSpec s;
    s.dim = dim;
    s.family = ProfileFamily::PureInverseSquare;
    s.lambda = s.lambda1 = s.lambda2 = lambda;
    return s;
}

PotentialSpec PotentialSpec::blended(int dim, double lambda1, double lambda2, double theta) {
    check_couplings(dim, lambda1, lambda2);
    if (!(theta > 0.0)) throw validation_error("theta must be positive");
    PotentialSpec s;
    s.dim = dim;
    s.family = ProfileFamily::Blended;
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    s.theta = theta;
    return s;
}

PotentialSpec PotentialSpec::with_bump(int dim, double base_lambda, double mu,
                                       const BumpShape& shape, double theta) {
    check_couplings(dim, base_lambda, base_lambda);
    if (!(shape.width > 0.0) || !(shape.r_outer > shape.r_inner)) {
        throw validation_error("bump shape: need width > 0 and r_outer > r_inner");
    }
    PotentialSpec s;
    s.dim = dim;
    s.family = ProfileFamily::InverseSquareBump;
    s.lambda = s.lambda1 = s.lambda2 = base_lambda;
    s.theta = theta;
    s.bump_mu = mu;
    s.bump = shape;
    return s;
}

PotentialSpec PotentialSpec::bump_amplitude(double mu) const {
    if (family != ProfileFamily::InverseSquareBump) {
        throw validation_error("bump_amplitude: spec has no bump profile");
    }
    PotentialSpec s = *this;
    s.bump_mu = mu;
    return s;
}

double eval(const PotentialSpec& spec, double r) {
    if (!(r > 0.0)) throw validation_error("potential eval: r must be positive");
    switch (spec.family) {
        case ProfileFamily::Zero:
            return 0.0;
        case ProfileFamily::PureInverseSquare:
            return spec.lambda / (r * r);
        case ProfileFamily::Blended: {
            const double s = blend_switch(r, spec.theta);
            return (spec.lambda1 + (spec.lambda2 - spec.lambda1) * s) / (r * r);
        }
        case ProfileFamily::InverseSquareBump:
            return spec.lambda / (r * r) + spec.bump_mu * spec.bump.eval(r);
    }
    return 0.0;
}

double residual(const PotentialSpec& spec, double r, double lambda) {
    if (!(r > 0.0)) throw validation_error("potential residual: r must be positive");
    return eval(spec, r) - lambda / (r * r);
}

namespace {

// Scaled residual sequence along a probe; decides pass/fail from the final
// value and the log-log decay trend.
struct ProbeResult {
    bool ok;
    double last;
    std::string why;
};

ProbeResult probe_limit(const std::vector<double>& scaled, double tol) {
    const double last = scaled.back();
    if (last <= tol) return {true, last, ""};
    // Not yet below tol: accept a clean power-law decay toward the limit end.
    const int n = static_cast<int>(scaled.size());
    int decreasing = 0;
    for (int i = 1; i < n; ++i) {
        if (scaled[i] <= scaled[i - 1] * (1.0 + 1e-12)) ++decreasing;
    }
    if (decreasing < n - 1) {
        return {false, last, "scaled residual not monotone decreasing toward the limit"};
    }
    // log-log slope over the last half of the probe
    const int i0 = n / 2;
    const double drop = scaled[i0] > 0.0 && last > 0.0 ? std::log(scaled[i0] / last) : 0.0;
    if (drop <= 0.05 * (n - 1 - i0)) {
        return {false, last, "scaled residual stagnates above tol"};
    }
    return {true, last, ""};
}

} // namespace

AsymptoticsReport validate_asymptotics(const PotentialSpec& spec, double tol,
                                       double probe_r_lo, double probe_r_hi,
                                       int points_per_decade) {
    AsymptoticsReport rep;
    const int decades_lo = static_cast<int>(std::ceil(std::log10(1.0 / probe_r_lo)));
    const int decades_hi = static_cast<int>(std::ceil(std::log10(probe_r_hi)));
    std::vector<double> near0, nearInf;
    const int n0 = decades_lo * points_per_decade;
    for (int i = 0; i <= n0; ++i) {
        // descending: r from 1e-4-ish down to probe_r_lo
        const double r = 1e-4 * std::pow(probe_r_lo / 1e-4, static_cast<double>(i) / n0);
        near0.push_back(std::pow(r, -spec.theta) * std::abs(r * r * eval(spec, r) - spec.lambda1));
    }
    const int n1 = decades_hi * points_per_decade;
    for (int i = 0; i <= n1; ++i) {
        const double r = 1e4 * std::pow(probe_r_hi / 1e4, static_cast<double>(i) / n1);
        nearInf.push_back(std::pow(r, spec.theta) * std::abs(r * r * eval(spec, r) - spec.lambda2));
    }
    const ProbeResult p0 = probe_limit(near0, tol);
    const ProbeResult p1 = probe_limit(nearInf, tol);
    rep.near_zero_value = p0.last;
    rep.near_inf_value = p1.last;
    rep.passed = p0.ok && p1.ok;
    if (!rep.passed) {
        std::ostringstream oss;
        oss << "asymptotic hypothesis violated:";
        if (!p0.ok) oss << " [r->0] " << p0.why << " (last=" << p0.last << ")";
        if (!p1.ok) oss << " [r->inf] " << p1.why << " (last=" << p1.last << ")";
        rep.message = oss.str();
    }
    return rep;
}

bool hardy_floor(const PotentialSpec& spec, const RadialGrid& grid, double margin) {
    const double ls = lambda_star(spec.dim);
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        inf = std::min(inf, r * r * eval(spec, r));
    }
    return inf > ls + margin;
}

} // namespace heatlab
