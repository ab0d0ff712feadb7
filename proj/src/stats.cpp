#include "specfield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specfield/error.hpp"
#include "specfield/parallel.hpp"
#include "specfield/rng.hpp"
#include "specfield/spectral.hpp"

namespace specfield::stats {

WeightVector::WeightVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 0) throw ValidationError("weight vector must have even length 2m");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ValidationError("weight vector entries must be finite");
  }
}

double WeightVector::norm2() const {
  double acc = 0.0;
  for (double c : coeffs_) acc += c * c;
  return acc;
}

double g_functional(const WeightVector& bv, std::span<const cplx> z) {
  if (z.size() != bv.m()) {
    throw ValidationError("G: weight vector has m=" + std::to_string(bv.m()) + " but got " +
                          std::to_string(z.size()) + " values");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) acc += bv.a(j) * z[j].real() + bv.b(j) * z[j].imag();
  return acc;
}

Distribution Distribution::exponential(double mean) {
  if (!(mean > 0.0)) throw ValidationError("exponential mean must be > 0");
  return {Kind::Exponential, mean, mean * mean};
}

Distribution Distribution::normal(double mean, double variance) {
  if (!(variance > 0.0)) throw ValidationError("normal variance must be > 0");
  return {Kind::Normal, mean, variance};
}

double Distribution::cdf(double x) const {
  switch (kind) {
    case Kind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-x / mean);
    case Kind::Normal:
      return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
  }
  return 0.0;
}

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  constexpr double kTol = 1e-10;
  double q = 0.0;
  if (t < 1.0) {
    // Theta-function form; the alternating series converges too slowly for small t.
    double acc = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * kPi * kPi / (8.0 * t * t));
      acc += term;
      if (term < kTol) break;
    }
    q = 1.0 - std::sqrt(2.0 * kPi) / t * acc;
  } else {
    for (int k = 1; k < 100; ++k) {
      const double term = 2.0 * std::exp(-2.0 * k * k * t * t);
      q += (k % 2 == 1) ? term : -term;
      if (term < kTol) break;
    }
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_statistic(std::span<const double> samples, const Distribution& null) {
  if (samples.empty()) throw ValidationError("KS needs at least one sample");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = null.cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

double cross_frequency_independence(const Eigen::MatrixXd& periodograms) {
  const auto rows = periodograms.rows();
  const auto cols = periodograms.cols();
  if (rows < 2 || cols < 2) throw ValidationError("cross-frequency check needs R >= 2 and m >= 2");
  const Eigen::MatrixXd centered = periodograms.rowwise() - periodograms.colwise().mean();
  const Eigen::VectorXd scale = centered.colwise().norm();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (scale(j) == 0.0) throw ValidationError("periodogram column " + std::to_string(j) + " is constant");
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index k = j + 1; k < cols; ++k) {
      const double r = centered.col(j).dot(centered.col(k)) / (scale(j) * scale(k));
      worst = std::max(worst, std::min(1.0, std::abs(r)));
    }
  }
  return worst;
}

namespace {

std::size_t dims_position(const FrequencyScheme& scheme, const BoxDims& dims) {
  for (std::size_t n = 0; n < scheme.dims_sequence.size(); ++n) {
    if (scheme.dims_sequence[n] == dims) return n;
  }
  throw ValidationError("scheme has no frequencies for the requested dims");
}

double require_positive_density(const LinearFieldSpec& spec, const Frequency& base) {
  if (!is_admissible(base)) throw ValidationError("base frequency is not admissible");
  const double f = spectral_density(spec, base);
  const double variance = autocovariance(spec, Lag(spec.dim(), 0)).real();
  if (variance <= 0.0 || f <= 1e-12 * variance) {
    throw DegenerateSpectrumError(
        "f(lambda) = 0: the normalized sums converge to 0 (degenerate case); no CLT target");
  }
  return f;
}

}  // namespace

CltReport run_clt_experiment(const LinearFieldSpec& spec, const FrequencyScheme& scheme,
                             const BoxDims& dims, std::size_t replications, std::uint64_t seed) {
  if (replications < 2) throw ValidationError("need at least 2 replications");
  if (dims.dim() != spec.dim()) throw ValidationError("dims dimension does not match the spec");
  const std::size_t pos = dims_position(scheme, dims);
  const auto& freqs = scheme.per_n[pos];
  const std::size_t m = freqs.size();
  const double f = require_positive_density(spec, scheme.base);
  if (scheme.separation) {
    FrequencyScheme single{scheme.base, {dims}, {freqs}, std::nullopt};
    if (!check_separation(single, *scheme.separation).ok) {
      throw ValidationError("scheme frequencies are not separated at these dims");
    }
  }

  CltReport report;
  report.frequencies = freqs;
  report.dims = dims;
  report.f_lambda = f;
  report.target_diagonal = 0.5 * f;
  report.replications = replications;
  report.seed = seed;
  report.samples.resize(replications);

  parallel_for(replications, [&](std::size_t i) {
    const auto sample = generate(spec, dims, Lag(dims.dim(), 0), rng::derive_seed(seed, i));
    report.samples[i] = periodogram_vector(sample, freqs);
  });

  const double root_v = std::sqrt(static_cast<double>(dims.volume()));
  const auto r_count = static_cast<Eigen::Index>(replications);
  Eigen::MatrixXd coords(r_count, static_cast<Eigen::Index>(2 * m));
  Eigen::MatrixXd values(r_count, static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < r_count; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& e = report.samples[static_cast<std::size_t>(i)][j];
      coords(i, static_cast<Eigen::Index>(2 * j)) = e.sum.real() / root_v;
      coords(i, static_cast<Eigen::Index>(2 * j + 1)) = e.sum.imag() / root_v;
      values(i, static_cast<Eigen::Index>(j)) = e.value;
    }
  }

  const Eigen::MatrixXd centered = coords.rowwise() - coords.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(replications - 1);
  report.covariance.assign(2 * m, std::vector<double>(2 * m));
  for (std::size_t a = 0; a < 2 * m; ++a) {
    for (std::size_t b = 0; b < 2 * m; ++b) {
      const double c = cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      report.covariance[a][b] = c;
      const double target = a == b ? report.target_diagonal : 0.0;
      report.max_cov_error = std::max(report.max_cov_error, std::abs(c - target));
    }
  }

  const auto coord_null = Distribution::normal(0.0, report.target_diagonal);
  std::vector<double> column(replications);
  for (Eigen::Index c = 0; c < coords.cols(); ++c) {
    for (Eigen::Index i = 0; i < r_count; ++i) column[static_cast<std::size_t>(i)] = coords(i, c);
    report.coordinate_ks.push_back(ks_statistic(column, coord_null));
  }
  const auto exp_null = Distribution::exponential(f);
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    for (Eigen::Index i = 0; i < r_count; ++i) column[static_cast<std::size_t>(i)] = values(i, c);
    report.periodogram_ks.push_back(ks_statistic(column, exp_null));
    report.periodogram_means.push_back(values.col(c).mean());
  }
  if (m >= 2) report.max_cross_correlation = cross_frequency_independence(values);
  return report;
}

double exact_g_second_moment(const LinearFieldSpec& spec, std::span<const Frequency> freqs,
                             const BoxDims& dims, const WeightVector& bv) {
  if (bv.m() != freqs.size()) throw ValidationError("weight vector length does not match m");
  // G = Re U with U = sum_j c_j S_j, c_j = a_j - i b_j; E (Re U)^2 = (E|U|^2 + Re E U^2) / 2.
  cplx abs2{0.0, 0.0}, square{0.0, 0.0};
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const cplx cj{bv.a(j), -bv.b(j)};
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      const cplx ck{bv.a(k), -bv.b(k)};
      abs2 += cj * std::conj(ck) * spectral::covariance_of_sums(spec, freqs[j], freqs[k], dims);
      square += cj * ck * spectral::product_of_sums(spec, freqs[j], freqs[k], dims);
    }
  }
  return 0.5 * (abs2.real() + square.real());
}

std::vector<MillerRow> miller_check(const LinearFieldSpec& spec, const FrequencyScheme& scheme,
                                    const WeightVector& bv, std::size_t replications,
                                    std::uint64_t seed) {
  if (replications < 2) throw ValidationError("need at least 2 replications");
  if (bv.m() != scheme.m()) throw ValidationError("weight vector length does not match m");
  const double f = require_positive_density(spec, scheme.base);
  const double target = 0.5 * f * bv.norm2();

  std::vector<MillerRow> rows;
  for (std::size_t n = 0; n < scheme.dims_sequence.size(); ++n) {
    const auto& dims = scheme.dims_sequence[n];
    const auto& freqs = scheme.per_n[n];
    const double volume = static_cast<double>(dims.volume());
    const std::uint64_t stream = rng::derive_seed(seed, n + 1);
    std::vector<double> g2(replications);
    parallel_for(replications, [&](std::size_t i) {
      const auto sample = generate(spec, dims, Lag(dims.dim(), 0), rng::derive_seed(stream, i));
      const auto entries = periodogram_vector(sample, freqs);
      std::vector<cplx> sums;
      sums.reserve(entries.size());
      for (const auto& e : entries) sums.push_back(e.sum);
      const double g = g_functional(bv, sums);
      g2[i] = g * g / volume;
    });
    double mean = 0.0;
    for (double x : g2) mean += x;
    mean /= static_cast<double>(replications);
    double var = 0.0;
    for (double x : g2) var += (x - mean) * (x - mean);
    var /= static_cast<double>(replications - 1);
    const double exact = exact_g_second_moment(spec, freqs, dims, bv);
    rows.push_back({n + 1, dims, target, mean, std::sqrt(var / static_cast<double>(replications)),
                    std::abs(target - mean), exact, std::abs(target - exact)});
  }
  return rows;
}

}  // namespace specfield::stats
