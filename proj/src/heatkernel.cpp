// SPDX-License-Identifier: Apache-2.0
#include "heatlab/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatlab/bessel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

double mode_shift(int dim, int l) {
    return static_cast<double>(l) * (static_cast<double>(l) + dim - 2.0);
}

double mode_potential(const PotentialSpec& spec, int l, double r) {
    return eval(spec, r) + mode_shift(spec.dim, l) / (r * r);
}

double zonal_harmonic(int dim, int l, double c) {
    if (dim == 2) {
        // Chebyshev limit of the Gegenbauer family
        const double theta = std::acos(std::clamp(c, -1.0, 1.0));
        return l == 0 ? 1.0 / (2.0 * M_PI) : std::cos(l * theta) / M_PI;
    }
    const double nu = 0.5 * (dim - 2.0);
    // Gegenbauer recurrence
    double c0 = 1.0, c1 = 2.0 * nu * c;
    double cl = (l == 0) ? c0 : c1;
    for (int k = 2; k <= l; ++k) {
        const double ck = (2.0 * c * (k + nu - 1.0) * c1 - (k + 2.0 * nu - 2.0) * c0) / k;
        c0 = c1;
        c1 = ck;
        cl = ck;
    }
    const double norm = std::tgamma(nu) / (2.0 * std::pow(M_PI, nu + 1.0));
    return norm * (l + nu) * cl;
}

double oracle_mode(int dim, double lambda, int l, double r, double rho, double t) {
    if (!(r > 0.0) || !(rho > 0.0) || !(t > 0.0)) {
        throw validation_error("oracle_mode: need r, rho, t > 0");
    }
    const double half = 0.5 * (dim - 2.0);
    const double nu2 = half * half + lambda + mode_shift(dim, l);
    if (nu2 < -1e-12) throw validation_error("oracle_mode: lambda below the Hardy constant");
    const double nu = std::sqrt(std::max(nu2, 0.0));
    const double z = r * rho / (2.0 * t);
    const double gauss = std::exp(-(r - rho) * (r - rho) / (4.0 * t));
    return std::pow(r * rho, -half) / (2.0 * t) * gauss * scaled_bessel_i(nu, z);
}

AssemblyResult assemble(const std::vector<double>& mode_values, int dim, double cos_theta) {
    AssemblyResult res;
    double last = 0.0;
    for (size_t l = 0; l < mode_values.size(); ++l) {
        last = mode_values[l] * zonal_harmonic(dim, static_cast<int>(l), cos_theta);
        res.value += last;
    }
    res.truncation = res.value != 0.0 ? std::abs(last / res.value) : 0.0;
    return res;
}

double oracle_kernel(int dim, double lambda, double r, double rho, double cos_theta,
                     double t, int l_max) {
    const double z = r * rho / (2.0 * t);
    int cap = l_max >= 0 ? l_max
                         : static_cast<int>(std::sqrt(2.0 * z * 40.0 + 100.0)) + 80;
    double sum = 0.0;
    double scale = 0.0;
    int tiny_run = 0;
    for (int l = 0; l <= cap; ++l) {
        const double term = oracle_mode(dim, lambda, l, r, rho, t) *
                            zonal_harmonic(dim, l, cos_theta);
        sum += term;
        scale = std::max(scale, std::abs(term));
        if (l_max < 0) {
            if (scale > 0.0 && std::abs(term) < 1e-15 * scale) {
                if (++tiny_run >= 4) break;
            } else {
                tiny_run = 0;
            }
        }
    }
    return sum;
}

bool series_resolvable(double r, double rho, double cos_theta, double t) {
    const double cancel = r * rho * (1.0 - cos_theta) / (2.0 * t);
    const double radial = (r - rho) * (r - rho) / (4.0 * t);
    return cancel <= 25.0 && radial <= 400.0;
}

double ModeKernel::at(double r, int time_index) const {
    const Eigen::ArrayXd& u = values.at(time_index);
    if (r <= grid.r_min) return u[0];
    if (r >= grid.r_max) return u[grid.size() - 1];
    const int i = grid.index_below(r);
    const double x0 = std::log(grid.nodes[i]);
    const double x1 = std::log(grid.nodes[i + 1]);
    const double w = (std::log(r) - x0) / (x1 - x0);
    return (1.0 - w) * u[i] + w * u[i + 1];
}

namespace {

// Thomas solve of a tridiagonal system; a = sub, b = diag, c = sup.
void tridiag_solve(Eigen::ArrayXd& b, const Eigen::ArrayXd& a, const Eigen::ArrayXd& c,
                   Eigen::ArrayXd& rhs) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
    }
}

struct ModeOperator {
    Eigen::ArrayXd sub, diag, sup; // B = L - V_l on the interior unknowns
    Eigen::ArrayXd mass;           // r_i^N (times h gives quadrature weight)
    int n = 0;
};

ModeOperator build_operator(const PotentialSpec& spec, int l, const RadialGrid& grid) {
    const int dim = spec.dim;
    const int n = grid.size() - 1; // Dirichlet at the last node
    const double h = grid.log_step();
    ModeOperator op;
    op.n = n;
    op.sub.setZero(n);
    op.diag.setZero(n);
    op.sup.setZero(n);
    op.mass.resize(n);
    const double aplus = exponents(dim, spec.lambda1 + mode_shift(dim, l)).a_plus;
    const double ghost = std::exp(-h * aplus); // u_{-1} = ghost * u_0
    for (int i = 0; i < n; ++i) {
        const double x = std::log(grid.nodes[i]);
        const double m = std::exp(dim * x);
        op.mass[i] = m;
        const double wl = std::exp((dim - 2.0) * (x - 0.5 * h));
        const double wr = std::exp((dim - 2.0) * (x + 0.5 * h));
        const double vl = mode_potential(spec, l, grid.nodes[i]);
        op.diag[i] = -(wl + wr) / (h * h * m) - vl;
        if (i > 0) op.sub[i] = wl / (h * h * m);
        if (i + 1 < n) op.sup[i] = wr / (h * h * m);
        if (i == 0) op.diag[0] += ghost * wl / (h * h * m);
    }
    return op;
}

// Crank-Nicolson evolution from (t0, u0) recording the state at the
// requested times.
std::vector<Eigen::ArrayXd> evolve(const ModeOperator& op, Eigen::ArrayXd u, double t0,
                                   const std::vector<double>& times, double ratio,
                                   double* leak) {
    std::vector<Eigen::ArrayXd> out;
    double t = t0;
    size_t next = 0;
    double max_edge = 0.0, max_all = 1e-300;
    while (next < times.size()) {
        if (times[next] <= t * (1.0 + 1e-12)) {
            out.push_back(u);
            ++next;
            continue;
        }
        double dt = ratio * t;
        if (t + dt > times[next]) dt = times[next] - t;
        // rhs = (I + dt/2 B) u
        Eigen::ArrayXd rhs(op.n);
        for (int i = 0; i < op.n; ++i) {
            double v = (1.0 + 0.5 * dt * op.diag[i]) * u[i];
            if (i > 0) v += 0.5 * dt * op.sub[i] * u[i - 1];
            if (i + 1 < op.n) v += 0.5 * dt * op.sup[i] * u[i + 1];
            rhs[i] = v;
        }
        Eigen::ArrayXd b = 1.0 - 0.5 * dt * op.diag;
        Eigen::ArrayXd a = -0.5 * dt * op.sub;
        Eigen::ArrayXd c = -0.5 * dt * op.sup;
        tridiag_solve(b, a, c, rhs);
        u = rhs;
        t += dt;
        max_edge = std::max(max_edge, std::abs(u[op.n - 1]));
        max_all = std::max(max_all, u.abs().maxCoeff());
    }
    if (leak) *leak = max_edge / max_all;
    return out;
}

} // namespace

ModeKernel solve_mode(const PotentialSpec& spec, int l, double source_radius,
                      const std::vector<double>& times, const SolverConfig& cfg) {
    const RadialGrid& grid = cfg.grid;
    const int dim = spec.dim;
    if (!(source_radius > grid.r_min * 4.0) || !(source_radius < grid.r_max / 4.0)) {
        throw validation_error("solve_mode: source radius must lie well inside the grid");
    }
    if (!std::is_sorted(times.begin(), times.end())) {
        throw validation_error("solve_mode: times must be ascending");
    }
    const double h = grid.log_step();
    const double local = source_radius * (std::exp(h) - 1.0);
    const ModeOperator op = build_operator(spec, l, grid);

    auto run = [&](double width_factor, double* leak) {
        const double s = width_factor * cfg.source_width * local;
        const double t0 = 0.5 * s * s; // the bump is the kernel smoothed to this time
        if (!times.empty() && times.front() < 4.0 * t0) {
            std::ostringstream oss;
            oss << "solve_mode: requested time " << times.front()
                << " below resolvable t0 = " << t0 << "; refine the grid or narrow the source";
            throw validation_error(oss.str());
        }
        Eigen::ArrayXd u0(op.n);
        for (int i = 0; i < op.n; ++i) {
            const double d = grid.nodes[i] - source_radius;
            u0[i] = std::exp(-d * d / (2.0 * s * s));
        }
        // each mode starts as delta(r - rho)/rho^{N-1}: unit mass under r^{N-1} dr
        const double mass = (u0 * op.mass).sum() * h;
        u0 *= 1.0 / mass;
        return evolve(op, u0, t0, times, cfg.dt_ratio, leak);
    };

    ModeKernel mk;
    mk.l = l;
    mk.source_radius = source_radius;
    mk.times = times;
    mk.grid = grid;
    double leak1 = 0.0, leak2 = 0.0;
    auto full = run(1.0, &leak1);
    if (cfg.richardson) {
        auto halfw = run(0.5, &leak2);
        for (size_t k = 0; k < full.size(); ++k) {
            full[k] = (4.0 * halfw[k] - full[k]) / 3.0; // bias ~ width^2
        }
    }
    mk.boundary_leak = std::max(leak1, leak2);
    // append the Dirichlet node so profiles cover the whole grid
    for (auto& u : full) {
        Eigen::ArrayXd v(grid.size());
        v.head(op.n) = u;
        v[grid.size() - 1] = 0.0;
        mk.values.push_back(std::move(v));
    }
    return mk;
}

KernelSlice ground_state_transform(const KernelSlice& slice,
                                   const std::function<double(double)>& U) {
    KernelSlice out = slice;
    for (auto& s : out.samples) {
        s.p /= U(s.rx) * U(s.ry);
    }
    return out;
}

double weighted_conservation(const std::function<double(double)>& p0_of_rho,
                             const std::function<double(double)>& U, int dim,
                             double r, const RadialGrid& grid) {
    const int n = grid.size();
    Eigen::ArrayXd g(n);
    for (int i = 0; i < n; ++i) {
        const double rho = grid.nodes[i];
        g[i] = p0_of_rho(rho) * U(rho) * std::pow(rho, dim - 1);
    }
    double p0 = 0.0;
    if (g[0] > 0.0 && g[1] > 0.0) {
        p0 = std::log(g[1] / g[0]) / std::log(grid.nodes[1] / grid.nodes[0]);
    }
    const Eigen::ArrayXd cum = cumulative_log_integral(grid.nodes, g, p0, true);
    return cum[n - 1] / U(r);
}

} // namespace heatlab
