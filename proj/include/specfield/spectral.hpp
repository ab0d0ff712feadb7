#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "specfield/field.hpp"
#include "specfield/types.hpp"

namespace specfield::spectral {

/// E I_n^lambda in the lag domain: sum_{|h_s|<v_s} prod_s (1 - |h_s|/v_s) r(h) e^{-i h.lambda}.
/// Throws InternalConsistencyError if the imaginary residual reaches 1e-8.
double expected_periodogram_exact(const LinearFieldSpec& spec, const Frequency& lambda,
                                  const BoxDims& dims);

/// Torus trapezoid rule for the integral of prod_s K(theta_s, v_s) f(theta + lambda)
/// against normalized Haar measure. Requires grid_points_per_dim >= 4 max_s v_s.
double expected_periodogram_quadrature(const LinearFieldSpec& spec, const Frequency& lambda,
                                       const BoxDims& dims, std::size_t grid_points_per_dim);

/// E[S^lambda conj(S^mu)] / V on the unshifted box.
cplx covariance_of_sums(const LinearFieldSpec& spec, const Frequency& lambda, const Frequency& mu,
                        const BoxDims& dims);

/// E[S^lambda S^mu] / V (no conjugate); identically 0 for circular fields.
cplx product_of_sums(const LinearFieldSpec& spec, const Frequency& lambda, const Frequency& mu,
                     const BoxDims& dims);

struct ExpectationRow {
  std::size_t n;  // 1-based position in the dims sequence
  BoxDims dims;
  double sup_err;
};

struct ExpectationReport {
  std::size_t grid_size;
  std::vector<ExpectationRow> rows;
};

/// Points -pi + 2 pi (i + 1) / g, i = 0..g-1, a uniform grid on (-pi, pi].
std::vector<double> torus_grid(std::size_t g);

/// sup over a tensor grid of |E I_n^lambda - f(lambda)| per dims in the sequence.
ExpectationReport uniform_convergence_report(const LinearFieldSpec& spec,
                                             std::span<const BoxDims> dims_sequence,
                                             std::size_t lambda_grid_size);

/// CSV with columns n, v, sup_err; v is written as 32x32.
void write_report_csv(std::ostream& out, const ExpectationReport& report);

}  // namespace specfield::spectral
