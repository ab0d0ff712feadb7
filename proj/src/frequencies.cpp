#include "specfield/frequencies.hpp"

#include <cmath>
#include <string>

#include "specfield/error.hpp"

namespace specfield {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw ValidationError("separation delta must satisfy 0 < delta < 1/2, got " + std::to_string(delta));
  }
}

}  // namespace

SeparationSpec::SeparationSpec(std::size_t m)
    : m_(m), delta_(m * (m > 0 ? m - 1 : 0) / 2, 0.25), threshold_(delta_.size(), 1) {
  if (m == 0) throw ValidationError("separation spec needs m >= 1");
}

SeparationSpec SeparationSpec::uniform(std::size_t m, double delta, std::size_t threshold) {
  SeparationSpec sep(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) sep.set(j, k, delta, threshold);
  return sep;
}

std::size_t SeparationSpec::slot(std::size_t j, std::size_t k) const {
  if (j == k || j >= m_ || k >= m_) throw ValidationError("separation pair index out of range");
  if (j > k) std::swap(j, k);
  // Row-major upper triangle.
  return j * m_ - j * (j + 1) / 2 + (k - j - 1);
}

void SeparationSpec::set(std::size_t j, std::size_t k, double delta, std::size_t threshold) {
  require_delta(delta);
  if (threshold < 1) throw ValidationError("separation threshold N must be >= 1");
  const auto i = slot(j, k);
  delta_[i] = delta;
  threshold_[i] = threshold;
}

double SeparationSpec::delta(std::size_t j, std::size_t k) const { return delta_[slot(j, k)]; }
std::size_t SeparationSpec::threshold(std::size_t j, std::size_t k) const { return threshold_[slot(j, k)]; }

bool is_admissible(const Frequency& lambda) {
  for (double c : lambda.coords()) {
    if (c != -kPi && c != 0.0 && c != kPi) return true;
  }
  return false;
}

std::vector<Frequency> build_separated(const Frequency& lambda, std::size_t m, double delta,
                                       std::size_t axis, const BoxDims& dims) {
  if (!is_admissible(lambda)) throw ValidationError("base frequency is not admissible");
  require_delta(delta);
  if (m < 1) throw ValidationError("need m >= 1 frequencies");
  if (axis >= lambda.dim() || dims.dim() != lambda.dim()) {
    throw ValidationError("separation axis or dims do not match the frequency dimension");
  }
  constexpr double kMargin = 2.0;
  const double gap = kMargin * std::pow(static_cast<double>(dims[axis]), -(0.5 - delta));
  std::vector<Frequency> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto coords = lambda.coords();
    coords[axis] += static_cast<double>(j) * gap;
    if (coords[axis] > kPi) {
      throw ValidationError("separated frequency " + std::to_string(j + 1) + " leaves (-pi, pi]; shrink m or move lambda");
    }
    out.emplace_back(std::move(coords));
  }
  return out;
}

FrequencyScheme build_scheme(const SchemeParams& params, std::span<const BoxDims> dims_sequence) {
  FrequencyScheme scheme{params.base, {dims_sequence.begin(), dims_sequence.end()}, {},
                         SeparationSpec::uniform(params.m, params.delta)};
  for (const auto& dims : dims_sequence) {
    scheme.per_n.push_back(build_separated(params.base, params.m, params.delta, params.axis, dims));
  }
  return scheme;
}

SeparationResult check_separation(const FrequencyScheme& scheme, const SeparationSpec& sep) {
  if (scheme.per_n.size() != scheme.dims_sequence.size()) {
    throw ValidationError("scheme has mismatched frequency lists and dims sequence");
  }
  if (scheme.m() != sep.m()) throw ValidationError("scheme and separation spec disagree on m");
  const std::size_t m = sep.m();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      const double exponent = -(0.5 - sep.delta(j, k));
      for (std::size_t n = sep.threshold(j, k); n <= scheme.per_n.size(); ++n) {
        const auto& dims = scheme.dims_sequence[n - 1];
        const auto& a = scheme.per_n[n - 1][j];
        const auto& b = scheme.per_n[n - 1][k];
        bool separated = false;
        for (std::size_t s = 0; s < dims.dim() && !separated; ++s) {
          separated = std::abs(a[s] - b[s]) > std::pow(static_cast<double>(dims[s]), exponent);
        }
        if (!separated) return {false, SeparationWitness{j + 1, k + 1, n}};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace specfield
