#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "specfield/field.hpp"
#include "specfield/frequencies.hpp"
#include "specfield/stats.hpp"
#include "specfield/types.hpp"

namespace specfield::blocking {

/// rho'(X, n) values, nonincreasing in n, plus the lag past which they are exactly 0.
struct MixingProfile {
  std::map<std::int64_t, double> values;
  std::optional<std::int64_t> dependence_range;

  /// Throws ValidationError unless values lie in [0, 1] and are nonincreasing.
  void validate() const;
  /// rho'(n): 0 past the dependence range, else the entry at the largest listed lag <= n.
  [[nodiscard]] double at(std::int64_t n) const;

  /// Profile of an m-dependent field: 0 for n > range, 1 (no information) below.
  static MixingProfile m_dependent(std::int64_t range);
};

struct BlockingPlan {
  std::int64_t v1 = 0;
  std::int64_t s = 0;  // small-slice width
  std::int64_t p = 0;  // number of big slices
  std::int64_t r = 0;  // big-slice width
  double q = 0.0;      // truncation exponent
};

/// s = floor(v1^{1/3}), p = min{s, floor(1/sqrt(rho'(s)))}, and the unique r >= 1 with
/// (r - 1 + s) p <= v1 < (r + s) p. rho'(s) = 0 gives p = s.
BlockingPlan plan(std::int64_t v1, const MixingProfile& profile, double q);

/// Inclusive range of first coordinates (1-based).
struct Slab {
  std::int64_t first;
  std::int64_t last;
  [[nodiscard]] std::int64_t width() const { return last >= first ? last - first + 1 : 0; }
};

struct BlockSets {
  BoxDims dims;
  std::vector<Slab> blocks;    // B(l, n), l = 1..p
  std::vector<Slab> leftover;  // Z(n) = box minus the blocks

  [[nodiscard]] std::int64_t block_cardinality(std::size_t l) const;
  [[nodiscard]] std::int64_t leftover_cardinality() const;
  /// Linear storage indices of the slabs (first coordinate is the slowest axis).
  [[nodiscard]] std::vector<std::size_t> indices(std::span<const Slab> slabs) const;
};

/// B(l, n) = {k in box : (l-1)(r+s) < k_1 <= l r + (l-1) s}.
BlockSets block_index_sets(const BlockingPlan& plan, const BoxDims& dims);

struct TruncatedField {
  BoxDims dims;
  double q;
  std::vector<cplx> bounded;  // B_{k,q}
  std::vector<cplx> tail;     // T_{k,q}
};

/// <k> = prod_i k_i.
double index_product(std::span<const std::int64_t> k);

/// E[X 1{|X| <= t}] for the field's marginal law. Zero for every centered Gaussian law.
cplx truncation_centering(const LinearFieldSpec& spec, double threshold);
/// E[|X|^2 1{|X| <= t}] for the field's Gaussian marginal.
double truncated_second_moment(const LinearFieldSpec& spec, double threshold);

/// Splits X_k^lambda into bounded and tail parts at |X_k| <= <k>^q, each re-centered.
TruncatedField truncate(const LinearFieldSpec& spec, const FieldSample& sample,
                        const Frequency& lambda, double q);

struct NegligibilityRow {
  std::size_t n;
  BoxDims dims;
  BlockingPlan plan;
  std::int64_t leftover_cardinality;
  double leftover_mean;  // E |sum_{Z(n)} G(bv, B) / sqrt V|^2
  double leftover_se;
  double tail_mean;      // E sum_j |Z_{n,q}^{lambda(j)}|^2 / V
  double tail_se;
  std::optional<double> leftover_exact;  // single-tap (iid) fields only
  std::optional<double> tail_exact;
};

struct NegligibilityConfig {
  SchemeParams scheme;
  std::vector<BoxDims> dims_sequence;
  double q = 0.2;
  stats::WeightVector weights;
  MixingProfile profile;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
};

std::vector<NegligibilityRow> negligibility_report(const LinearFieldSpec& spec,
                                                   const NegligibilityConfig& config);

}  // namespace specfield::blocking
