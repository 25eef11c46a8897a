// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_ERRORS_HPP
#define HEATLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heatlab {

/// Input or hypothesis violations (bad spec parameters, failed asymptotic
/// validation, out-of-range arguments). CLI exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative schemes that failed to converge (Picard, bisection, stiff
/// stepping). CLI exit code 3.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failures (unwritable output, missing config). CLI exit code 4.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace heatlab

#endif
