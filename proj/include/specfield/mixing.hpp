#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "specfield/blocking.hpp"
#include "specfield/field.hpp"

namespace specfield::mixing {

/// Disjoint finite index sets S, T with their separation along one axis,
/// n = min over k in S, l in T of |k_u - l_u|. Sets may interlace along other axes.
class IndexSetPair {
 public:
  IndexSetPair(std::vector<Lag> s, std::vector<Lag> t, std::size_t axis);

  [[nodiscard]] const std::vector<Lag>& s() const { return s_; }
  [[nodiscard]] const std::vector<Lag>& t() const { return t_; }
  [[nodiscard]] std::size_t axis() const { return axis_; }
  [[nodiscard]] std::int64_t separation() const { return separation_; }

 private:
  std::vector<Lag> s_, t_;
  std::size_t axis_;
  std::int64_t separation_;
};

struct CanonicalResult {
  double rho;
  bool regularized;  // a block covariance was singular and got a 1e-12 ridge
};

/// Largest canonical correlation between the real coordinates of {X_k : k in S} and
/// {X_l : l in T}. Exact maximal correlation for Gaussian fields; a lower bound in general.
CanonicalResult canonical_rho(const LinearFieldSpec& spec, const IndexSetPair& pair);

struct Witness {
  std::vector<Lag> s, t;
  std::size_t axis;
  double rho;
};

struct MixingEstimate {
  blocking::MixingProfile profile;  // certified lower bounds, exact zeros past the range
  std::vector<std::optional<Witness>> witnesses;  // index n - 1
  std::size_t window_points = 0;
  std::size_t candidate_sets = 0;
  std::size_t pairs_evaluated = 0;
  bool any_regularized = false;
};

/// Exhaustive search over pairs of subsets of [-w, w]^d with |S|, |T| <= max_set_size.
/// Throws ValidationError if the number of ordered set pairs exceeds pair_budget.
MixingEstimate rho_prime_profile(const LinearFieldSpec& spec, std::int64_t window_radius,
                                 std::size_t max_set_size, std::int64_t n_max,
                                 std::size_t pair_budget = 20'000'000);

}  // namespace specfield::mixing
