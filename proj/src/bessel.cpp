// SPDX-License-Identifier: Apache-2.0
#include "heatlab/bessel.hpp"

#include <cmath>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

// Series I_nu(z) = sum_k t_k, t_k = (z/2)^{nu+2k} / (k! Gamma(nu+k+1)).
// Summed in linear space starting at the peak index so that the scaled value
// e^{-z} t_k never overflows.
double scaled_series(double nu, double z) {
    const double lz = std::log(0.5 * z);
    // peak of log t_k - z over continuous k
    const double zz = 0.5 * z;
    double kp = 0.5 * (-(nu + 1.0) + std::sqrt((nu + 1.0) * (nu + 1.0) + 4.0 * zz * zz));
    int k0 = kp > 0.0 ? static_cast<int>(kp) : 0;
    const double log_t0 = (nu + 2.0 * k0) * lz - std::lgamma(k0 + 1.0) -
                          std::lgamma(nu + k0 + 1.0) - z;
    const double t0 = std::exp(log_t0);
    double sum = t0;
    // upward
    double t = t0;
    for (int k = k0 + 1; k < k0 + 100000; ++k) {
        t *= zz * zz / (static_cast<double>(k) * (nu + k));
        sum += t;
        if (t < 1e-18 * sum) break;
    }
    // downward
    t = t0;
    for (int k = k0; k >= 1; --k) {
        t *= static_cast<double>(k) * (nu + k) / (zz * zz);
        sum += t;
        if (t < 1e-18 * sum) break;
    }
    return sum;
}

// Hankel expansion: I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k a_k(nu)/z^k.
double scaled_asymptotic(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k <= 40; ++k) {
        const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= -num / (8.0 * k * z);
        if (std::abs(term) > prev) break; // divergent tail
        sum += term;
        prev = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

} // namespace

double scaled_bessel_i(double nu, double z) {
    if (nu < 0.0 || z < 0.0) throw validation_error("scaled_bessel_i: need nu >= 0, z >= 0");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (z >= 40.0 && z >= 2.0 * nu * nu + 20.0) {
        return scaled_asymptotic(nu, z);
    }
    return scaled_series(nu, z);
}

} // namespace heatlab
