#pragma once

#include <cstdint>
#include <span>

#include "specfield/types.hpp"

namespace specfield::kernels {

/// Fejer kernel K(alpha, n) = sin^2(n alpha / 2) / (n sin^2(alpha / 2)).
/// Returns the continuous limit n at alpha = 0 (mod 2 pi). Requires n >= 1.
double fejer(double alpha, std::int64_t n);

/// Modulated Dirichlet kernel (1 - e^{-i n alpha}) / (sqrt(n) (1 - e^{-i alpha})),
/// with |D|^2 = K. Returns sqrt(n) at alpha = 0 (mod 2 pi).
cplx dirichlet_mod(double alpha, std::int64_t n);

/// prod_s K(theta_s, v_s).
double fejer_product(std::span<const double> theta, const BoxDims& v);

}  // namespace specfield::kernels
