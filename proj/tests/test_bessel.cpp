// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <initializer_list>

#include "doctest.h"

#include "heatlab/bessel.hpp"

using namespace heatlab;

namespace {
// Half-integer orders have elementary closed forms valid for every z.
double scaled_i_half(double z) {
    // e^{-z} I_{1/2}(z) = sqrt(2/(pi z)) * (1 - e^{-2z}) / 2
    return std::sqrt(2.0 / (M_PI * z)) * 0.5 * (-std::expm1(-2.0 * z));
}
double scaled_i_three_halves(double z) {
    // I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z)
    // e^{-z} I_{3/2}(z) = sqrt(2/(pi z)) [ (1 + e^{-2z})/2 - (1 - e^{-2z})/(2z) ]
    const double em = std::exp(-2.0 * z);
    return std::sqrt(2.0 / (M_PI * z)) * (0.5 * (1.0 + em) + std::expm1(-2.0 * z) / (2.0 * z));
}
} // namespace

TEST_CASE("agrees with the standard library at moderate arguments") {
    for (double nu : {0.0, 0.5, 1.0, 2.7, 10.0}) {
        for (double z : {0.1, 0.7, 3.0, 11.0, 30.0}) {
            const double expected = std::cyl_bessel_i(nu, z) * std::exp(-z);
            CHECK(scaled_bessel_i(nu, z) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("half-integer closed forms hold from tiny to huge z") {
    for (double z : {1e-3, 0.5, 5.0, 50.0, 1e3, 1e6}) {
        CHECK(scaled_bessel_i(0.5, z) == doctest::Approx(scaled_i_half(z)).epsilon(1e-11));
        // the reference itself cancels near z = 0, hence the looser tolerance
        CHECK(scaled_bessel_i(1.5, z) == doctest::Approx(scaled_i_three_halves(z)).epsilon(1e-8));
    }
}

TEST_CASE("z = 0 limits") {
    CHECK(scaled_bessel_i(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(scaled_bessel_i(1.3, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("three-term recurrence holds across the series/asymptotic switch") {
    // I_{nu-1}(z) - I_{nu+1}(z) = (2 nu / z) I_nu(z), scaled by e^{-z}
    for (double nu : {1.0, 2.5, 8.0}) {
        for (double z : {5.0, 35.0, 45.0, 1e3, 1e5}) {
            const double lhs = scaled_bessel_i(nu - 1.0, z) - scaled_bessel_i(nu + 1.0, z);
            const double rhs = (2.0 * nu / z) * scaled_bessel_i(nu, z);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("large-argument limit approaches 1/sqrt(2 pi z)") {
    for (double z : {1e4, 1e6, 1e8}) {
        const double lead = 1.0 / std::sqrt(2.0 * M_PI * z);
        CHECK(scaled_bessel_i(0.0, z) == doctest::Approx(lead).epsilon(1.0 / z));
    }
}

TEST_CASE("monotone decreasing in the order") {
    for (double z : {0.5, 10.0, 200.0}) {
        double prev = scaled_bessel_i(0.0, z);
        for (double nu : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double cur = scaled_bessel_i(nu, z);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
    }
}

TEST_CASE("no overflow where the unscaled Bessel function would blow up") {
    const double v = scaled_bessel_i(3.0, 5e7);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}
