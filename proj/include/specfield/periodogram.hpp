#pragma once

#include <span>
#include <vector>

#include "specfield/field.hpp"
#include "specfield/types.hpp"

namespace specfield {

/// S = sum_{k in box} e^{-i k.lambda} X_k with k the absolute (shift-included) index.
cplx modulated_sum(const FieldSample& sample, const Frequency& lambda);

/// I = |S|^2 / V.
double periodogram(const FieldSample& sample, const Frequency& lambda);

struct PeriodogramEntry {
  cplx sum;
  double value;
};

/// Elementwise (S, I) over a frequency list, order preserved.
std::vector<PeriodogramEntry> periodogram_vector(const FieldSample& sample,
                                                 std::span<const Frequency> freqs);

}  // namespace specfield
