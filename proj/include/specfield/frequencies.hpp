#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "specfield/types.hpp"

namespace specfield {

/// Pairwise separation exponents delta(j,k) in (0, 1/2) and thresholds N(j,k) >= 1,
/// stored for unordered pairs j < k (0-based).
class SeparationSpec {
 public:
  explicit SeparationSpec(std::size_t m);
  static SeparationSpec uniform(std::size_t m, double delta, std::size_t threshold = 1);

  void set(std::size_t j, std::size_t k, double delta, std::size_t threshold);
  [[nodiscard]] std::size_t m() const { return m_; }
  [[nodiscard]] double delta(std::size_t j, std::size_t k) const;
  [[nodiscard]] std::size_t threshold(std::size_t j, std::size_t k) const;

 private:
  [[nodiscard]] std::size_t slot(std::size_t j, std::size_t k) const;
  std::size_t m_;
  std::vector<double> delta_;
  std::vector<std::size_t> threshold_;
};

/// m frequency sequences indexed by n (position in the dims sequence).
struct FrequencyScheme {
  Frequency base;
  std::vector<BoxDims> dims_sequence;
  /// per_n[n][j] = lambda^(j, n), 0-based.
  std::vector<std::vector<Frequency>> per_n;
  /// Separation the builder guarantees (uniform delta, N = 1), when built.
  std::optional<SeparationSpec> separation;

  [[nodiscard]] std::size_t m() const { return per_n.empty() ? 0 : per_n.front().size(); }
};

/// Builder parameters as they appear in experiment configs.
struct SchemeParams {
  Frequency base;
  std::size_t m = 1;
  double delta = 0.25;
  std::size_t axis = 0;
};

/// At least one coordinate outside {-pi, 0, pi}; exact comparison.
bool is_admissible(const Frequency& lambda);

/// lambda^(j) = lambda + (j - 1) * 2 * v_axis^{-(1/2 - delta)} e_axis, j = 1..m.
std::vector<Frequency> build_separated(const Frequency& lambda, std::size_t m, double delta,
                                       std::size_t axis, const BoxDims& dims);

/// build_separated applied to each dims of the sequence.
FrequencyScheme build_scheme(const SchemeParams& params, std::span<const BoxDims> dims_sequence);

struct SeparationWitness {
  std::size_t j, k, n;  // 1-based
};

struct SeparationResult {
  bool ok = true;
  std::optional<SeparationWitness> violation;
};

/// For each pair and every n >= N(j,k): some s has |lambda_s^(j,n) - lambda_s^(k,n)| >
/// (v_s^(n))^{-(1/2 - delta(j,k))}. Reports the first violating (j, k, n).
SeparationResult check_separation(const FrequencyScheme& scheme, const SeparationSpec& sep);

}  // namespace specfield
