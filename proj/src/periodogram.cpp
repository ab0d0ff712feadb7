#include "specfield/periodogram.hpp"

#include <cmath>

#include "specfield/error.hpp"
#include "specfield/summation.hpp"

namespace specfield {

namespace {

// Per-axis phase tables e^{-i k_s lambda_s} for the absolute indices of the box.
std::vector<std::vector<cplx>> phase_tables(const FieldSample& sample, const Frequency& lambda) {
  const auto& dims = sample.dims();
  std::vector<std::vector<cplx>> tables(dims.dim());
  for (std::size_t s = 0; s < dims.dim(); ++s) {
    tables[s].resize(static_cast<std::size_t>(dims[s]));
    for (std::int64_t i = 0; i < dims[s]; ++i) {
      const double k = static_cast<double>(i + 1 + sample.shift()[s]);
      tables[s][static_cast<std::size_t>(i)] = std::polar(1.0, -k * lambda[s]);
    }
  }
  return tables;
}

cplx modulated_sum_impl(const FieldSample& sample, const Frequency& lambda,
                        std::vector<cplx>& scratch) {
  const auto& dims = sample.dims();
  if (lambda.dim() != dims.dim()) throw ValidationError("modulated_sum: dimension mismatch");
  const auto tables = phase_tables(sample, lambda);
  const auto& values = sample.values();
  scratch.resize(values.size());

  // Odometer over the box, last coordinate fastest (matches storage order).
  const std::size_t d = dims.dim();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    cplx phase = tables[0][idx[0]];
    for (std::size_t s = 1; s < d; ++s) phase *= tables[s][idx[s]];
    scratch[i] = phase * values[i];
    for (std::size_t s = d; s-- > 0;) {
      if (++idx[s] < static_cast<std::size_t>(dims[s])) break;
      idx[s] = 0;
    }
  }
  return pairwise_sum<cplx>(scratch);
}

}  // namespace

cplx modulated_sum(const FieldSample& sample, const Frequency& lambda) {
  std::vector<cplx> scratch;
  return modulated_sum_impl(sample, lambda, scratch);
}

double periodogram(const FieldSample& sample, const Frequency& lambda) {
  return std::norm(modulated_sum(sample, lambda)) / static_cast<double>(sample.dims().volume());
}

std::vector<PeriodogramEntry> periodogram_vector(const FieldSample& sample,
                                                 std::span<const Frequency> freqs) {
  std::vector<PeriodogramEntry> out;
  out.reserve(freqs.size());
  std::vector<cplx> scratch;
  const double volume = static_cast<double>(sample.dims().volume());
  for (const auto& lambda : freqs) {
    const cplx s = modulated_sum_impl(sample, lambda, scratch);
    out.push_back({s, std::norm(s) / volume});
  }
  return out;
}

}  // namespace specfield
