#include "specfield/kernels.hpp"

#include <cmath>

#include "specfield/error.hpp"

namespace specfield::kernels {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kSeriesTol = 1e-6;

void require_order(std::int64_t n) {
  if (n < 1) throw ValidationError("kernel order n must be >= 1");
}

// alpha reduced to [-pi, pi).
double wrap(double alpha) {
  double a = std::remainder(alpha, 2.0 * kPi);
  if (a >= kPi) a -= 2.0 * kPi;
  return a;
}

double sin_small(double x) {
  if (std::abs(x) < kSeriesTol) return x - x * x * x / 6.0;
  return std::sin(x);
}

bool at_singularity(double alpha) {
  return std::abs(1.0 - std::polar(1.0, -alpha)) < kSingularTol;
}

}  // namespace

double fejer(double alpha, std::int64_t n) {
  require_order(n);
  if (!std::isfinite(alpha)) throw ValidationError("kernel argument must be finite");
  const double nd = static_cast<double>(n);
  if (at_singularity(alpha)) return nd;
  const double a = wrap(alpha);
  const double den = sin_small(0.5 * a);
  const double num = sin_small(0.5 * nd * a);
  return (num * num) / (nd * den * den);
}

cplx dirichlet_mod(double alpha, std::int64_t n) {
  require_order(n);
  if (!std::isfinite(alpha)) throw ValidationError("kernel argument must be finite");
  const double nd = static_cast<double>(n);
  if (at_singularity(alpha)) return {std::sqrt(nd), 0.0};
  const double a = wrap(alpha);
  // 1 - e^{-ix} = 2i sin(x/2) e^{-ix/2}; the ratio is stable near x = 0.
  const double ratio = sin_small(0.5 * nd * a) / sin_small(0.5 * a);
  return std::polar(ratio / std::sqrt(nd), -0.5 * (nd - 1.0) * a);
}

double fejer_product(std::span<const double> theta, const BoxDims& v) {
  if (theta.size() != v.dim()) throw ValidationError("fejer_product: dimension mismatch");
  double p = 1.0;
  for (std::size_t s = 0; s < theta.size(); ++s) p *= fejer(theta[s], v[s]);
  return p;
}

}  // namespace specfield::kernels
