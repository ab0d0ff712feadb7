#include "specfield/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specfield/error.hpp"
#include "specfield/parallel.hpp"

namespace specfield::mixing {

namespace {

std::int64_t axis_separation(const std::vector<Lag>& s, const std::vector<Lag>& t, std::size_t axis) {
  std::int64_t sep = std::numeric_limits<std::int64_t>::max();
  for (const auto& k : s)
    for (const auto& l : t) sep = std::min(sep, std::abs(k[axis] - l[axis]));
  return sep;
}

bool disjoint(const std::vector<Lag>& s, const std::vector<Lag>& t) {
  const std::set<Lag> seen(s.begin(), s.end());
  return std::none_of(t.begin(), t.end(), [&](const Lag& l) { return seen.count(l) > 0; });
}

Lag difference(const Lag& a, const Lag& b) {
  Lag h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) h[i] = a[i] - b[i];
  return h;
}

// Real coordinates of the field values: Re only for real fields, (Re, Im) otherwise.
Eigen::MatrixXd joint_covariance(const LinearFieldSpec& spec, const std::vector<Lag>& a,
                                 const std::vector<Lag>& b) {
  const Eigen::Index per = spec.is_real() ? 1 : 2;
  Eigen::MatrixXd c(static_cast<Eigen::Index>(a.size()) * per, static_cast<Eigen::Index>(b.size()) * per);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Lag h = difference(a[i], b[j]);
      const cplx r = autocovariance(spec, h);  // E X_k conj(X_l)
      const cplx p = pseudo_covariance(spec, h);  // E X_k X_l
      const auto row = static_cast<Eigen::Index>(i) * per;
      const auto col = static_cast<Eigen::Index>(j) * per;
      if (per == 1) {
        c(row, col) = r.real();
      } else {
        c(row, col) = 0.5 * (r.real() + p.real());
        c(row + 1, col + 1) = 0.5 * (r.real() - p.real());
        c(row, col + 1) = 0.5 * (p.imag() - r.imag());
        c(row + 1, col) = 0.5 * (p.imag() + r.imag());
      }
    }
  }
  return c;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& sym, bool& regularized) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (values.minCoeff() <= 1e-12 * scale) {
    regularized = true;
    values = values.cwiseMax(0.0).array() + 1e-12;
  }
  return eig.eigenvectors() * values.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

IndexSetPair::IndexSetPair(std::vector<Lag> s, std::vector<Lag> t, std::size_t axis)
    : s_(std::move(s)), t_(std::move(t)), axis_(axis), separation_(0) {
  if (s_.empty() || t_.empty()) throw ValidationError("index sets must be non-empty");
  const std::size_t d = s_.front().size();
  for (const auto* set : {&s_, &t_})
    for (const auto& k : *set)
      if (k.size() != d) throw ValidationError("index set dimension mismatch");
  if (axis_ >= d) throw ValidationError("separation axis out of range");
  if (!disjoint(s_, t_)) throw ValidationError("index sets overlap");
  separation_ = axis_separation(s_, t_, axis_);
}

CanonicalResult canonical_rho(const LinearFieldSpec& spec, const IndexSetPair& pair) {
  if (pair.s().front().size() != spec.dim()) throw ValidationError("index dimension does not match the spec");
  const Eigen::MatrixXd cross = joint_covariance(spec, pair.s(), pair.t());
  if (cross.cwiseAbs().maxCoeff() == 0.0) return {0.0, false};
  bool regularized = false;
  const Eigen::MatrixXd ws = inverse_sqrt(joint_covariance(spec, pair.s(), pair.s()), regularized);
  const Eigen::MatrixXd wt = inverse_sqrt(joint_covariance(spec, pair.t(), pair.t()), regularized);
  const Eigen::MatrixXd whitened = ws * cross * wt;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return {std::clamp(top, 0.0, 1.0), regularized};
}

MixingEstimate rho_prime_profile(const LinearFieldSpec& spec, std::int64_t window_radius,
                                 std::size_t max_set_size, std::int64_t n_max, std::size_t pair_budget) {
  if (window_radius < 0) throw ValidationError("window radius must be >= 0");
  if (max_set_size < 1) throw ValidationError("set size must be >= 1");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  const std::size_t d = spec.dim();

  std::vector<Lag> points;
  {
    const BoxDims window(std::vector<std::int64_t>(d, 2 * window_radius + 1));
    for (std::size_t i = 0; i < static_cast<std::size_t>(window.volume()); ++i) {
      Lag k = window.offset_of(i);
      for (auto& c : k) c -= window_radius;
      points.push_back(std::move(k));
    }
  }

  // Count subsets before materializing them.
  double subset_count = 0.0, binom = 1.0;
  for (std::size_t size = 1; size <= max_set_size && size <= points.size(); ++size) {
    binom = binom * static_cast<double>(points.size() - size + 1) / static_cast<double>(size);
    subset_count += binom;
  }
  const double pair_count = subset_count * subset_count;
  if (pair_count > static_cast<double>(pair_budget)) {
    throw ValidationError("mixing enumeration needs " + std::to_string(static_cast<long long>(pair_count)) +
                          " set pairs, budget is " + std::to_string(pair_budget));
  }

  std::vector<std::vector<Lag>> subsets;
  std::vector<std::size_t> choice;
  for (std::size_t size = 1; size <= max_set_size && size <= points.size(); ++size) {
    choice.resize(size);
    for (std::size_t i = 0; i < size; ++i) choice[i] = i;
    while (true) {
      std::vector<Lag> set;
      for (auto c : choice) set.push_back(points[c]);
      subsets.push_back(std::move(set));
      std::size_t i = size;
      while (i > 0 && choice[i - 1] == points.size() - size + i - 1) --i;
      if (i == 0) break;
      ++choice[i - 1];
      for (std::size_t j = i; j < size; ++j) choice[j] = choice[j - 1] + 1;
    }
  }

  const std::int64_t range = spec.dependence_range();
  const auto levels = static_cast<std::size_t>(std::min(n_max, range));
  struct Local {
    std::vector<double> best;
    std::vector<std::optional<Witness>> witness;
    std::size_t evaluated = 0;
    bool regularized = false;
  };
  std::vector<Local> per_s(subsets.size());

  // Pairs (S, T) with S before T; canonical_rho is symmetric in its arguments.
  parallel_for(subsets.size(), [&](std::size_t a) {
    Local local{std::vector<double>(levels, 0.0), std::vector<std::optional<Witness>>(levels), 0, false};
    for (std::size_t b = a + 1; b < subsets.size() && levels > 0; ++b) {
      const auto& s = subsets[a];
      const auto& t = subsets[b];
      if (!disjoint(s, t)) continue;
      std::size_t best_axis = 0;
      std::int64_t sep = 0;
      for (std::size_t u = 0; u < d; ++u) {
        const auto su = axis_separation(s, t, u);
        if (su > sep) {
          sep = su;
          best_axis = u;
        }
      }
      if (sep < 1) continue;
      const auto top = static_cast<std::size_t>(std::min<std::int64_t>(sep, static_cast<std::int64_t>(levels)));
      const auto result = canonical_rho(spec, IndexSetPair(s, t, best_axis));
      ++local.evaluated;
      local.regularized = local.regularized || result.regularized;
      for (std::size_t n = 0; n < top; ++n) {
        if (result.rho > local.best[n]) {
          local.best[n] = result.rho;
          local.witness[n] = Witness{s, t, best_axis, result.rho};
        }
      }
    }
    per_s[a] = std::move(local);
  });

  MixingEstimate est;
  est.window_points = points.size();
  est.candidate_sets = subsets.size();
  est.witnesses.assign(static_cast<std::size_t>(n_max), std::nullopt);
  std::vector<double> best(static_cast<std::size_t>(n_max), 0.0);
  for (const auto& local : per_s) {
    est.pairs_evaluated += local.evaluated;
    est.any_regularized = est.any_regularized || local.regularized;
    for (std::size_t n = 0; n < local.best.size(); ++n) {
      if (local.best[n] > best[n]) {
        best[n] = local.best[n];
        est.witnesses[n] = local.witness[n];
      }
    }
  }
  for (std::int64_t n = 1; n <= n_max; ++n) est.profile.values[n] = best[static_cast<std::size_t>(n - 1)];
  est.profile.dependence_range = range;
  return est;
}

}  // namespace specfield::mixing
