#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specfield/types.hpp"

namespace specfield {

enum class InnovationKind { RealGaussian, CircularComplexGaussian };

struct Tap {
  Lag lag;
  cplx coef;
};

/// Moving-average field X_k = sum_j a_j eps_{k-j} over i.i.d. Gaussian innovations.
/// Finite support makes the field m-dependent, hence rho'-mixing.
class LinearFieldSpec {
 public:
  LinearFieldSpec(std::size_t dim, std::vector<Tap> taps, InnovationKind kind, double innovation_std);

  /// Single unit tap at the origin: an i.i.d. field with variance sigma^2.
  static LinearFieldSpec iid(std::size_t dim, InnovationKind kind, double sigma = 1.0);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const std::vector<Tap>& taps() const { return taps_; }
  [[nodiscard]] InnovationKind innovation_kind() const { return kind_; }
  [[nodiscard]] double innovation_std() const { return sigma_; }
  [[nodiscard]] bool is_real() const { return kind_ == InnovationKind::RealGaussian; }

  /// max over taps of max_s |lag_s|.
  [[nodiscard]] std::int64_t support_radius() const;
  /// Per-axis extent max_j lag_s - min_j lag_s; r(h) = 0 once |h_s| exceeds it.
  [[nodiscard]] std::int64_t support_diameter(std::size_t axis) const;
  /// Smallest m such that sets separated by more than m along any axis are independent.
  [[nodiscard]] std::int64_t dependence_range() const;
  [[nodiscard]] std::int64_t min_lag(std::size_t axis) const { return lo_[axis]; }
  [[nodiscard]] std::int64_t max_lag(std::size_t axis) const { return hi_[axis]; }

  /// Returns a copy with every tap multiplied by c (the field scaled by c).
  [[nodiscard]] LinearFieldSpec scaled(cplx c) const;

 private:
  std::size_t dim_;
  std::vector<Tap> taps_;
  InnovationKind kind_;
  double sigma_;
  std::vector<std::int64_t> lo_, hi_;
};

/// Field values on the shifted box {k + w : 1 <= k_s <= v_s}, row-major.
class FieldSample {
 public:
  FieldSample(BoxDims dims, Lag shift, std::vector<cplx> values, std::uint64_t seed = 0);

  [[nodiscard]] const BoxDims& dims() const { return dims_; }
  [[nodiscard]] const Lag& shift() const { return shift_; }
  [[nodiscard]] const std::vector<cplx>& values() const { return values_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  /// Absolute lattice index k + w of the i-th stored value.
  [[nodiscard]] Lag absolute_index(std::size_t i) const;
  /// Value at an absolute index inside the box.
  [[nodiscard]] cplx at(std::span<const std::int64_t> absolute) const;

 private:
  BoxDims dims_;
  Lag shift_;
  std::vector<cplx> values_;
  std::uint64_t seed_;
};

/// sigma_eps^2 |sum_j a_j e^{-i j.lambda}|^2.
double spectral_density(const LinearFieldSpec& spec, const Frequency& lambda);
/// Same, without the (-pi, pi] check on theta (used on quadrature grids).
double spectral_density_at(const LinearFieldSpec& spec, std::span<const double> theta);

/// r(h) = E X_h conj(X_0) = sigma^2 sum_t a_t conj(a_{t-h}).
cplx autocovariance(const LinearFieldSpec& spec, std::span<const std::int64_t> h);

/// p(h) = E X_h X_0: r(h) for real fields, 0 for circular ones.
cplx pseudo_covariance(const LinearFieldSpec& spec, std::span<const std::int64_t> h);

/// Draws the field on the shifted box. The innovation at absolute index u is a pure
/// function of (seed, u), so boxes generated from one seed agree on their overlap.
FieldSample generate(const LinearFieldSpec& spec, const BoxDims& dims, const Lag& shift,
                     std::uint64_t seed);

}  // namespace specfield
