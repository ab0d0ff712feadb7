#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "specfield/field.hpp"
#include "specfield/frequencies.hpp"
#include "specfield/periodogram.hpp"
#include "specfield/types.hpp"

namespace specfield::stats {

/// (a_1, b_1, ..., a_m, b_m).
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> coeffs);

  [[nodiscard]] std::size_t m() const { return coeffs_.size() / 2; }
  [[nodiscard]] double a(std::size_t j) const { return coeffs_[2 * j]; }
  [[nodiscard]] double b(std::size_t j) const { return coeffs_[2 * j + 1]; }
  [[nodiscard]] double norm2() const;
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

  static WeightVector ones(std::size_t m) { return WeightVector(std::vector<double>(2 * m, 1.0)); }

 private:
  std::vector<double> coeffs_;
};

/// G(bv, z) = sum_j a_j Re z_j + b_j Im z_j.
double g_functional(const WeightVector& bv, std::span<const cplx> z);

struct Distribution {
  enum class Kind { Exponential, Normal };
  Kind kind;
  double mean;
  double variance;

  static Distribution exponential(double mean);
  static Distribution normal(double mean, double variance);
  [[nodiscard]] double cdf(double x) const;
};

struct KsResult {
  double statistic;
  double p_value;
};

/// Kolmogorov survival function Q(t) = sum_{k>=1} 2 (-1)^{k-1} e^{-2 k^2 t^2}.
double kolmogorov_survival(double t);

/// One-sample KS against a fully specified null; p from the asymptotic series at sqrt(n) D.
KsResult ks_statistic(std::span<const double> samples, const Distribution& null);

/// Max |Pearson correlation| over column pairs of an R x m matrix.
double cross_frequency_independence(const Eigen::MatrixXd& periodograms);

struct CltReport {
  std::vector<Frequency> frequencies;
  BoxDims dims;
  double f_lambda = 0.0;
  double target_diagonal = 0.0;  // f(lambda) / 2
  std::vector<std::vector<double>> covariance;  // 2m x 2m of (Re S_j, Im S_j) / sqrt V
  double max_cov_error = 0.0;
  std::vector<KsResult> coordinate_ks;   // vs N(0, f/2)
  std::vector<KsResult> periodogram_ks;  // vs Exponential(mean f)
  std::vector<double> periodogram_means;
  std::optional<double> max_cross_correlation;  // m >= 2 only
  std::size_t replications = 0;
  std::uint64_t seed = 0;

  /// Per replication, per frequency (S, I); kept for CSV output.
  std::vector<std::vector<PeriodogramEntry>> samples;
};

/// R independent replications of the periodogram vector at the scheme's frequencies for dims.
/// Replication i uses the stream derive_seed(seed, i). Throws DegenerateSpectrumError if f(lambda)=0.
CltReport run_clt_experiment(const LinearFieldSpec& spec, const FrequencyScheme& scheme,
                             const BoxDims& dims, std::size_t replications, std::uint64_t seed);

struct MillerRow {
  std::size_t n;
  BoxDims dims;
  double target;          // f(lambda) ||bv||^2 / 2
  double mc_mean;         // Monte Carlo E[G(bv, S / sqrt V)]^2
  double mc_se;
  double discrepancy;     // |target - mc_mean|
  double exact;           // E[G]^2 / V from the exact covariance and pseudo-covariance
  double exact_discrepancy;
};

/// Exact E[G(bv, S)^2] / V for the frequency list at dims.
double exact_g_second_moment(const LinearFieldSpec& spec, std::span<const Frequency> freqs,
                             const BoxDims& dims, const WeightVector& bv);

std::vector<MillerRow> miller_check(const LinearFieldSpec& spec, const FrequencyScheme& scheme,
                                    const WeightVector& bv, std::size_t replications,
                                    std::uint64_t seed);

}  // namespace specfield::stats
