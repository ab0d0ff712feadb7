#include "specfield/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>

#include "specfield/error.hpp"
#include "specfield/kernels.hpp"
#include "specfield/parallel.hpp"
#include "specfield/summation.hpp"

namespace specfield::spectral {

namespace {

void require_dims(const LinearFieldSpec& spec, const Frequency& lambda, const BoxDims& dims) {
  if (lambda.dim() != spec.dim() || dims.dim() != spec.dim()) {
    throw ValidationError("dimension mismatch between spec, frequency and box");
  }
}

// Visits every lag h with |h_s| <= min(diameter_s, v_s - 1).
template <typename Fn>
void for_each_lag(const LinearFieldSpec& spec, const BoxDims& dims, Fn&& fn) {
  const std::size_t d = spec.dim();
  std::vector<std::int64_t> reach(d);
  std::vector<std::int64_t> sides(d);
  for (std::size_t s = 0; s < d; ++s) {
    reach[s] = std::min(spec.support_diameter(s), dims[s] - 1);
    sides[s] = 2 * reach[s] + 1;
  }
  const BoxDims lag_box(sides);
  Lag h(d);
  for (std::size_t i = 0; i < static_cast<std::size_t>(lag_box.volume()); ++i) {
    const Lag off = lag_box.offset_of(i);
    for (std::size_t s = 0; s < d; ++s) h[s] = off[s] - reach[s];
    fn(static_cast<const Lag&>(h));
  }
}

double dot(const Lag& h, const Frequency& lambda) {
  double x = 0.0;
  for (std::size_t s = 0; s < h.size(); ++s) x += static_cast<double>(h[s]) * lambda[s];
  return x;
}

// sum over k in [1, v] with k + h in [1, v] of e^{-i k omega}.
cplx overlap_sum(std::int64_t v, std::int64_t h, double omega) {
  const std::int64_t lo = std::max<std::int64_t>(1, 1 - h);
  const std::int64_t hi = std::min<std::int64_t>(v, v - h);
  cplx acc{0.0, 0.0};
  for (std::int64_t k = lo; k <= hi; ++k) acc += std::polar(1.0, -static_cast<double>(k) * omega);
  return acc;
}

template <typename CovFn>
cplx lag_grouped_sum(const LinearFieldSpec& spec, const Frequency& lambda, const BoxDims& dims,
                     std::span<const double> omega, CovFn&& cov) {
  std::vector<cplx> terms;
  for_each_lag(spec, dims, [&](const Lag& h) {
    const cplx c = cov(h);
    if (c == cplx{0.0, 0.0}) return;
    cplx t = c * std::polar(1.0, -dot(h, lambda));
    for (std::size_t s = 0; s < h.size(); ++s) t *= overlap_sum(dims[s], h[s], omega[s]);
    terms.push_back(t);
  });
  return pairwise_sum<cplx>(terms) / static_cast<double>(dims.volume());
}

}  // namespace

double expected_periodogram_exact(const LinearFieldSpec& spec, const Frequency& lambda,
                                  const BoxDims& dims) {
  require_dims(spec, lambda, dims);
  std::vector<cplx> terms;
  for_each_lag(spec, dims, [&](const Lag& h) {
    double weight = 1.0;
    for (std::size_t s = 0; s < h.size(); ++s) {
      weight *= 1.0 - static_cast<double>(std::abs(h[s])) / static_cast<double>(dims[s]);
    }
    terms.push_back(weight * autocovariance(spec, h) * std::polar(1.0, -dot(h, lambda)));
  });
  const cplx total = pairwise_sum<cplx>(terms);
  if (std::abs(total.imag()) >= 1e-8) {
    throw InternalConsistencyError("expected periodogram has imaginary residual " +
                                   std::to_string(total.imag()));
  }
  return std::max(0.0, total.real());
}

double expected_periodogram_quadrature(const LinearFieldSpec& spec, const Frequency& lambda,
                                       const BoxDims& dims, std::size_t grid_points_per_dim) {
  require_dims(spec, lambda, dims);
  const std::size_t n = grid_points_per_dim;
  if (n < static_cast<std::size_t>(4 * dims.max_side())) {
    throw ValidationError("quadrature grid " + std::to_string(n) + " too coarse; need >= " +
                          std::to_string(4 * dims.max_side()));
  }
  const std::size_t d = spec.dim();
  if (std::pow(static_cast<double>(n), static_cast<double>(d)) > 1e8) {
    throw ValidationError("quadrature grid has more than 1e8 points");
  }

  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
  std::vector<std::vector<double>> kernel(d, std::vector<double>(n));
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t i = 0; i < n; ++i) kernel[s][i] = kernels::fejer(theta[i], dims[s]);

  // One slab per first-axis grid index; slabs reduced in ascending order.
  std::size_t inner = 1;
  for (std::size_t s = 1; s < d; ++s) inner *= n;
  std::vector<double> slabs(n);
  parallel_for(n, [&](std::size_t i0) {
    std::vector<double> point(d), vals(inner);
    std::vector<std::size_t> idx(d, 0);
    idx[0] = i0;
    for (std::size_t j = 0; j < inner; ++j) {
      std::size_t rest = j;
      for (std::size_t s = d; s-- > 1;) {
        idx[s] = rest % n;
        rest /= n;
      }
      double w = 1.0;
      for (std::size_t s = 0; s < d; ++s) {
        w *= kernel[s][idx[s]];
        point[s] = theta[idx[s]] + lambda[s];
      }
      vals[j] = w * spectral_density_at(spec, point);
    }
    slabs[i0] = pairwise_sum<double>(vals);
  });
  return pairwise_sum<double>(slabs) / std::pow(static_cast<double>(n), static_cast<double>(d));
}

cplx covariance_of_sums(const LinearFieldSpec& spec, const Frequency& lambda, const Frequency& mu,
                        const BoxDims& dims) {
  require_dims(spec, lambda, dims);
  require_dims(spec, mu, dims);
  std::vector<double> omega(spec.dim());
  for (std::size_t s = 0; s < omega.size(); ++s) omega[s] = lambda[s] - mu[s];
  return lag_grouped_sum(spec, lambda, dims, omega, [&](const Lag& h) { return autocovariance(spec, h); });
}

cplx product_of_sums(const LinearFieldSpec& spec, const Frequency& lambda, const Frequency& mu,
                     const BoxDims& dims) {
  require_dims(spec, lambda, dims);
  require_dims(spec, mu, dims);
  if (!spec.is_real()) return {0.0, 0.0};
  std::vector<double> omega(spec.dim());
  for (std::size_t s = 0; s < omega.size(); ++s) omega[s] = lambda[s] + mu[s];
  return lag_grouped_sum(spec, lambda, dims, omega, [&](const Lag& h) { return pseudo_covariance(spec, h); });
}

std::vector<double> torus_grid(std::size_t g) {
  std::vector<double> grid(g);
  for (std::size_t i = 0; i < g; ++i) {
    grid[i] = -kPi + 2.0 * kPi * static_cast<double>(i + 1) / static_cast<double>(g);
  }
  if (g > 0) grid.back() = kPi;
  return grid;
}

ExpectationReport uniform_convergence_report(const LinearFieldSpec& spec,
                                             std::span<const BoxDims> dims_sequence,
                                             std::size_t lambda_grid_size) {
  validate_dims_sequence(dims_sequence);
  if (lambda_grid_size < 1) throw ValidationError("lambda grid size must be >= 1");
  const std::size_t d = spec.dim();
  const auto axis = torus_grid(lambda_grid_size);
  std::size_t points = 1;
  for (std::size_t s = 0; s < d; ++s) points *= lambda_grid_size;

  ExpectationReport report{lambda_grid_size, {}};
  for (std::size_t n = 0; n < dims_sequence.size(); ++n) {
    const auto& dims = dims_sequence[n];
    if (dims.dim() != d) throw ValidationError("dims dimension does not match the spec");
    std::vector<double> err(points);
    parallel_for(points, [&](std::size_t p) {
      std::vector<double> coords(d);
      std::size_t rest = p;
      for (std::size_t s = d; s-- > 0;) {
        coords[s] = axis[rest % lambda_grid_size];
        rest /= lambda_grid_size;
      }
      const Frequency lambda(coords);
      err[p] = std::abs(expected_periodogram_exact(spec, lambda, dims) - spectral_density(spec, lambda));
    });
    report.rows.push_back({n + 1, dims, *std::max_element(err.begin(), err.end())});
  }
  return report;
}

void write_report_csv(std::ostream& out, const ExpectationReport& report) {
  out << "n,v,sup_err\n";
  for (const auto& row : report.rows) {
    out << row.n << ',';
    for (std::size_t s = 0; s < row.dims.dim(); ++s) out << (s ? "x" : "") << row.dims[s];
    out << ',' << std::setprecision(17) << row.sup_err << '\n';
  }
}

}  // namespace specfield::spectral
