// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_BESSEL_HPP
#define HEATLAB_BESSEL_HPP

namespace heatlab {

/// e^{-z} I_nu(z) for nu >= 0, z >= 0. Power series summed around its peak
/// term in scaled form for small and intermediate z; Hankel asymptotic
/// expansion once z dominates nu^2. Stable for large z where I_nu itself
/// overflows.
double scaled_bessel_i(double nu, double z);

} // namespace heatlab

#endif
