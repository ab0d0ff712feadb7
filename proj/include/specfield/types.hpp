#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

namespace specfield {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Lattice point or lag in Z^d.
using Lag = std::vector<std::int64_t>;

/// A point of (-pi, pi]^d.
class Frequency {
 public:
  Frequency() = default;
  explicit Frequency(std::vector<double> coords);
  Frequency(std::initializer_list<double> coords) : Frequency(std::vector<double>(coords)) {}

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] double operator[](std::size_t s) const { return coords_[s]; }
  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const Frequency&, const Frequency&) = default;

 private:
  std::vector<double> coords_;
};

/// Side lengths v of the box {k : 1 <= k_s <= v_s}.
class BoxDims {
 public:
  BoxDims() = default;
  explicit BoxDims(std::vector<std::int64_t> v);
  BoxDims(std::initializer_list<std::int64_t> v) : BoxDims(std::vector<std::int64_t>(v)) {}

  [[nodiscard]] std::size_t dim() const { return v_.size(); }
  [[nodiscard]] std::int64_t operator[](std::size_t s) const { return v_[s]; }
  [[nodiscard]] const std::vector<std::int64_t>& sides() const { return v_; }
  [[nodiscard]] std::int64_t volume() const { return volume_; }
  [[nodiscard]] std::int64_t min_side() const;
  [[nodiscard]] std::int64_t max_side() const;

  /// Row-major position (last coordinate fastest) of offset k, 0 <= k_s < v_s.
  [[nodiscard]] std::size_t linear_index(std::span<const std::int64_t> offset) const;
  /// Inverse of linear_index.
  [[nodiscard]] Lag offset_of(std::size_t linear) const;

  friend bool operator==(const BoxDims& a, const BoxDims& b) { return a.v_ == b.v_; }

 private:
  std::vector<std::int64_t> v_;
  std::int64_t volume_ = 0;
};

/// Dims sequence must have min-coordinate growth (non-decreasing and growing overall).
void validate_dims_sequence(std::span<const BoxDims> seq);

}  // namespace specfield
