// SPDX-License-Identifier: Apache-2.0
#include "heatlab/harmonic.hpp"

#include <cmath>
#include <sstream>

#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

double estimate_power(double r0, double g0, double r1, double g1) {
    if (g0 == 0.0 || g1 == 0.0 || (g0 > 0.0) != (g1 > 0.0)) return 0.0;
    return std::log(g1 / g0) / std::log(r1 / r0);
}

// u+(r) = r^{A+(lambda1)} (at the borderline A+ = A- = -(N-2)/2, still a
// plain power; the log only enters the second branch).
struct LeadingPower {
    double exponent;
    double eval(double r) const { return std::pow(r, exponent); }
    double deriv(double r) const { return exponent * std::pow(r, exponent - 1.0); }
};

} // namespace

double HarmonicProfile::interp(double r) const {
    const int n = grid.size();
    if (!(r > 0.0)) throw validation_error("interp: r must be positive");
    if (r > grid.r_max * (1.0 + 1e-12)) {
        throw validation_error("interp: r above grid r_max");
    }
    if (r < grid.r_min) {
        if (values[0] <= 0.0) throw validation_error("interp: non-positive profile at r_min");
        return values[0] * std::pow(r / grid.r_min, near_zero_exponent);
    }
    int i = grid.index_below(std::min(r, grid.nodes[n - 1]));
    const double r0 = grid.nodes[i], r1 = grid.nodes[i + 1];
    const double u0 = values[i], u1 = values[i + 1];
    if (u0 > 0.0 && u1 > 0.0) {
        const double p = std::log(u1 / u0) / std::log(r1 / r0);
        return u0 * std::pow(r / r0, p);
    }
    // linear fallback across sign changes
    const double w = (std::log(r) - std::log(r0)) / (std::log(r1) - std::log(r0));
    return (1.0 - w) * u0 + w * u1;
}

NearZeroSolution picard_near_zero(const PotentialSpec& spec, const RadialGrid& grid,
                                  double r_cut, double tol, int max_iter) {
    const int dim = spec.dim;
    const Exponents ex = exponents(dim, spec.lambda1);
    const LeadingPower up{ex.a_plus};

    int m = 0;
    while (m < grid.size() && grid.nodes[m] <= r_cut * (1.0 + 1e-12)) ++m;
    if (m < 8) throw validation_error("picard_near_zero: fewer than 8 grid nodes below r_cut");

    Eigen::ArrayXd r = grid.nodes.head(m);
    Eigen::ArrayXd uplus(m), vres(m);
    for (int i = 0; i < m; ++i) {
        uplus[i] = up.eval(r[i]);
        vres[i] = residual(spec, r[i], spec.lambda1);
    }

    Eigen::ArrayXd F = Eigen::ArrayXd::Zero(m);
    Eigen::ArrayXd Fprime = Eigen::ArrayXd::Zero(m);
    double prev_inc = std::numeric_limits<double>::infinity();
    int iter = 0;
    double inc = 0.0;
    for (iter = 1; iter <= max_iter; ++iter) {
        // inner integral: int_0^s t^{N-1} u+(t) V_l1(t) U_n(t) dt
        Eigen::ArrayXd g(m);
        for (int i = 0; i < m; ++i) {
            g[i] = std::pow(r[i], dim - 1) * uplus[i] * vres[i] * uplus[i] * (1.0 + F[i]);
        }
        const double p_in = estimate_power(r[0], g[0], r[1], g[1]);
        Eigen::ArrayXd inner = cumulative_log_integral(r, g, p_in, true);
        // outer integrand: s^{1-N} u+(s)^{-2} * inner(s)
        Eigen::ArrayXd q(m);
        for (int i = 0; i < m; ++i) {
            q[i] = std::pow(r[i], 1 - dim) / (uplus[i] * uplus[i]) * inner[i];
        }
        const double p_out = estimate_power(r[0], q[0], r[1], q[1]);
        Eigen::ArrayXd Fnew = cumulative_log_integral(r, q, p_out, true);

        inc = (Fnew - F).abs().maxCoeff();
        F = Fnew;
        Fprime = q;
        if (inc <= tol) break;
        if (iter >= 3 && inc > 0.75 * prev_inc) {
            std::ostringstream oss;
            oss << "picard_near_zero: iteration not contracting (increment " << inc
                << " after " << iter << " iterations); r_cut too large";
            throw convergence_error(oss.str());
        }
        prev_inc = inc;
    }
    if (inc > tol) {
        std::ostringstream oss;
        oss << "picard_near_zero: max_iter exceeded, last increment " << inc;
        throw convergence_error(oss.str());
    }

    NearZeroSolution out;
    out.r = r;
    out.values = uplus * (1.0 + F);
    out.derivative.resize(m);
    for (int i = 0; i < m; ++i) {
        out.derivative[i] = up.deriv(r[i]) * (1.0 + F[i]) + uplus[i] * Fprime[i];
    }
    out.iterations = iter;
    out.last_increment = inc;
    return out;
}

namespace {

// One Gauss-Legendre 2-stage (order 4, A-stable) step for the linear system
// y' = M(x) y with y = (U, dU/dx).
Eigen::Vector2d gauss4_step(const PotentialSpec& spec, int dim,
                            double x, double h, const Eigen::Vector2d& y) {
    const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6.0, c2 = 0.5 + s3 / 6.0;
    const double a11 = 0.25, a12 = 0.25 - s3 / 6.0;
    const double a21 = 0.25 + s3 / 6.0, a22 = 0.25;

    auto mat = [&](double xs) {
        const double r = std::exp(xs);
        Eigen::Matrix2d M;
        M << 0.0, 1.0, r * r * eval(spec, r), -(static_cast<double>(dim) - 2.0);
        return M;
    };
    const Eigen::Matrix2d M1 = mat(x + c1 * h);
    const Eigen::Matrix2d M2 = mat(x + c2 * h);
    Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
    A.block<2, 2>(0, 0) -= h * a11 * M1;
    A.block<2, 2>(0, 2) = -h * a12 * M1;
    A.block<2, 2>(2, 0) = -h * a21 * M2;
    A.block<2, 2>(2, 2) -= h * a22 * M2;
    Eigen::Vector4d rhs;
    rhs.head<2>() = M1 * y;
    rhs.tail<2>() = M2 * y;
    const Eigen::Vector4d k = A.partialPivLu().solve(rhs);
    return y + 0.5 * h * (k.head<2>() + k.tail<2>());
}

Eigen::Vector2d integrate_interval(const PotentialSpec& spec, int dim,
                                   double x0, double x1, Eigen::Vector2d y, int nsub) {
    const double h = (x1 - x0) / nsub;
    for (int k = 0; k < nsub; ++k) {
        y = gauss4_step(spec, dim, x0 + k * h, h, y);
    }
    return y;
}

} // namespace

HarmonicProfile extend_outward(const NearZeroSolution& partial, const PotentialSpec& spec,
                               const RadialGrid& grid) {
    const int n = grid.size();
    const int m = static_cast<int>(partial.r.size());
    const int dim = spec.dim;

    HarmonicProfile prof;
    prof.grid = grid;
    prof.values.resize(n);
    prof.derivative.resize(n);
    prof.values.head(m) = partial.values;
    prof.derivative.head(m) = partial.derivative;

    const double r_cut = partial.r[m - 1];
    Eigen::Vector2d y(partial.values[m - 1], r_cut * partial.derivative[m - 1]);
    for (int i = m; i < n; ++i) {
        const double x0 = std::log(grid.nodes[i - 1]);
        const double x1 = std::log(grid.nodes[i]);
        int nsub = 1;
        Eigen::Vector2d coarse = integrate_interval(spec, dim, x0, x1, y, nsub);
        for (;;) {
            const Eigen::Vector2d fine = integrate_interval(spec, dim, x0, x1, y, 2 * nsub);
            const double scale = std::max(fine.cwiseAbs().maxCoeff(), 1e-300);
            const double err = (fine - coarse).cwiseAbs().maxCoeff() / (15.0 * scale);
            if (err < 1e-12 || nsub >= 4096) {
                y = fine;
                break;
            }
            coarse = fine;
            nsub *= 2;
        }
        if (!std::isfinite(y[0]) || std::abs(y[0]) > 1e300) {
            std::ostringstream oss;
            oss << "extend_outward: overflow near r = " << grid.nodes[i];
            throw convergence_error(oss.str());
        }
        prof.values[i] = y[0];
        prof.derivative[i] = y[1] / grid.nodes[i];
    }

    // near-zero exponent: log-log slope over the first decade
    const int k = std::min(grid.points_per_decade, m - 1);
    prof.near_zero_exponent = std::log(prof.values[k] / prof.values[0]) /
                              std::log(grid.nodes[k] / grid.nodes[0]);
    // correction exponent theta': slope of log|U/u+ - 1| where measurable
    {
        const Exponents ex = exponents(dim, spec.lambda1);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int i = 0; i < m; ++i) {
            const double ratio = partial.values[i] / std::pow(partial.r[i], ex.a_plus) - 1.0;
            if (std::abs(ratio) > 1e-13) {
                const double x = std::log(partial.r[i]);
                const double yv = std::log(std::abs(ratio));
                sx += x; sy += yv; sxx += x * x; sxy += x * yv;
                ++cnt;
            }
        }
        prof.correction_exponent =
            cnt >= 4 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : spec.theta;
    }
    return prof;
}

HarmonicProfile build_profile(const PotentialSpec& spec, const RadialGrid& grid,
                              const PipelineOptions& opts) {
    double r_cut = opts.r_cut;
    NearZeroSolution near;
    for (int attempt = 0;; ++attempt) {
        try {
            near = picard_near_zero(spec, grid, r_cut, opts.picard_tol, opts.picard_max_iter);
            break;
        } catch (const convergence_error&) {
            if (attempt >= 3) throw;
            r_cut /= 4.0;
        }
    }
    HarmonicProfile prof = extend_outward(near, spec, grid);
    if (opts.fit_tail) {
        const double r_lo = grid.r_max / opts.tail_window_factor;
        bool positive = true;
        for (int i = 0; i < grid.size(); ++i) {
            if (grid.nodes[i] >= r_lo && prof.values[i] <= 0.0) { positive = false; break; }
        }
        if (positive) {
            prof.tail = fit_tail(prof, spec, r_lo, grid.r_max);
        }
    }
    return prof;
}

HarmonicProfile kelvin(const HarmonicProfile& profile, int dim) {
    const int n = profile.grid.size();
    HarmonicProfile out;
    out.grid = make_grid(1.0 / profile.grid.r_max, 1.0 / profile.grid.r_min,
                         profile.grid.points_per_decade);
    out.values.resize(n);
    out.derivative.resize(n);
    for (int i = 0; i < n; ++i) {
        const int j = n - 1 - i; // s = 1/r reverses the node order
        const double s = out.grid.nodes[i];
        const double w = profile.values[j];
        const double wp = profile.derivative[j];
        out.values[i] = std::pow(s, 2.0 - dim) * w;
        out.derivative[i] = (2.0 - dim) * std::pow(s, 1.0 - dim) * w -
                            std::pow(s, -dim) * wp;
    }
    const int k = std::min(out.grid.points_per_decade, n - 1);
    if (out.values[0] > 0.0 && out.values[k] > 0.0) {
        out.near_zero_exponent = std::log(out.values[k] / out.values[0]) /
                                 std::log(out.grid.nodes[k] / out.grid.nodes[0]);
    }
    return out;
}

TailFit fit_tail(const HarmonicProfile& profile, const PotentialSpec& spec,
                 double r_lo, double r_hi) {
    const RadialGrid& grid = profile.grid;
    const Exponents ex = exponents(spec.dim, spec.lambda2);
    const bool log_branch = ex.discriminant < 1e-12;
    const double half = -0.5 * (static_cast<double>(spec.dim) - 2.0);

    std::vector<int> idx;
    for (int i = 0; i < grid.size(); ++i) {
        if (grid.nodes[i] >= r_lo * (1.0 - 1e-12) && grid.nodes[i] <= r_hi * (1.0 + 1e-12)) {
            idx.push_back(i);
        }
    }
    if (idx.size() < 8) throw validation_error("fit_tail: window contains fewer than 8 nodes");

    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd B(k, 2);
    Eigen::VectorXd u(k);
    for (int j = 0; j < k; ++j) {
        const double r = grid.nodes[idx[j]];
        if (log_branch) {
            B(j, 0) = std::pow(r, half) * std::log(r);
            B(j, 1) = std::pow(r, half);
        } else {
            B(j, 0) = std::pow(r, ex.a_plus);
            B(j, 1) = std::pow(r, ex.a_minus);
        }
        u[j] = profile.values[idx[j]];
    }
    const double n0 = B.col(0).norm();
    const double n1 = B.col(1).norm();
    Eigen::MatrixXd Bn = B;
    Bn.col(0) /= n0;
    Bn.col(1) /= n1;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bn, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()[1] < 1e-13 * svd.singularValues()[0]) {
        throw validation_error(
            "fit_tail: basis ill-conditioned on the window (exponents too close); widen the window");
    }
    const Eigen::Vector2d cn = svd.solve(u);
    TailFit fit;
    fit.c1 = cn[0] / n0;
    fit.c2 = cn[1] / n1;
    fit.log_branch = log_branch;
    fit.window_lo = r_lo;
    fit.window_hi = r_hi;
    fit.residual = (B * Eigen::Vector2d(fit.c1, fit.c2) - u).norm() / u.norm();
    return fit;
}

Eigen::ArrayXd f_of_u(const HarmonicProfile& profile, int dim) {
    const Eigen::ArrayXd& r = profile.grid.nodes;
    const Eigen::ArrayXd& U = profile.values;
    const int n = profile.grid.size();
    if ((U <= 0.0).any()) throw validation_error("f_of_u: profile must be strictly positive");
    const double a0 = profile.near_zero_exponent;
    if (!(dim - 1 + 2.0 * a0 > -1.0)) {
        throw validation_error("f_of_u: near-zero exponent too singular (need A+ > -N/2)");
    }
    Eigen::ArrayXd g(n);
    for (int i = 0; i < n; ++i) g[i] = std::pow(r[i], dim - 1) * U[i] * U[i];
    Eigen::ArrayXd inner = cumulative_log_integral(r, g, dim - 1 + 2.0 * a0, true);
    Eigen::ArrayXd q(n);
    for (int i = 0; i < n; ++i) q[i] = std::pow(r[i], 1 - dim) / (U[i] * U[i]) * inner[i];
    // q ~ r near 0 regardless of the exponent of U
    Eigen::ArrayXd outer = cumulative_log_integral(r, q, 1.0, true);
    return U * outer;
}

std::optional<double> positivity_scan(const HarmonicProfile& profile) {
    const Eigen::ArrayXd& u = profile.values;
    const Eigen::ArrayXd& r = profile.grid.nodes;
    for (int i = 0; i + 1 < profile.grid.size(); ++i) {
        if (u[i] == 0.0) return r[i];
        if ((u[i] > 0.0) != (u[i + 1] > 0.0)) {
            const double x0 = std::log(r[i]), x1 = std::log(r[i + 1]);
            const double w = u[i] / (u[i] - u[i + 1]);
            return std::exp(x0 + w * (x1 - x0));
        }
    }
    return std::nullopt;
}

Eigen::ArrayXd ode_residual(const HarmonicProfile& profile, const PotentialSpec& spec) {
    const int n = profile.grid.size();
    const double h = profile.grid.log_step();
    const Eigen::ArrayXd& r = profile.grid.nodes;
    const Eigen::ArrayXd& u = profile.values;
    Eigen::ArrayXd res = Eigen::ArrayXd::Zero(n);
    for (int i = 1; i + 1 < n; ++i) {
        const double uxx = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        const double ux = (u[i + 1] - u[i - 1]) / (2.0 * h);
        res[i] = uxx + (spec.dim - 2.0) * ux - r[i] * r[i] * eval(spec, r[i]) * u[i];
    }
    return res;
}

} // namespace heatlab
