#include "specfield/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "specfield/error.hpp"
#include "specfield/rng.hpp"

namespace specfield {

LinearFieldSpec::LinearFieldSpec(std::size_t dim, std::vector<Tap> taps, InnovationKind kind,
                                 double innovation_std)
    : dim_(dim), taps_(std::move(taps)), kind_(kind), sigma_(innovation_std) {
  if (dim_ < 1 || dim_ > 4) throw ValidationError("field dimension must be in 1..4");
  if (taps_.empty()) throw ValidationError("field spec needs at least one tap");
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) {
    throw ValidationError("innovation_std must be finite and non-negative");
  }
  lo_.assign(dim_, 0);
  hi_.assign(dim_, 0);
  std::map<Lag, int> seen;
  for (std::size_t t = 0; t < taps_.size(); ++t) {
    const auto& tap = taps_[t];
    if (tap.lag.size() != dim_) throw ValidationError("tap lag dimension mismatch");
    if (!std::isfinite(tap.coef.real()) || !std::isfinite(tap.coef.imag())) {
      throw ValidationError("tap coefficient must be finite");
    }
    if (kind_ == InnovationKind::RealGaussian && tap.coef.imag() != 0.0) {
      throw ValidationError("real-gaussian innovations require real taps");
    }
    if (++seen[tap.lag] > 1) throw ValidationError("duplicate tap lag");
    for (std::size_t s = 0; s < dim_; ++s) {
      if (std::abs(tap.lag[s]) > 1'000'000) throw ValidationError("tap lag too large");
      if (t == 0 || tap.lag[s] < lo_[s]) lo_[s] = tap.lag[s];
      if (t == 0 || tap.lag[s] > hi_[s]) hi_[s] = tap.lag[s];
    }
  }
}

LinearFieldSpec LinearFieldSpec::iid(std::size_t dim, InnovationKind kind, double sigma) {
  return LinearFieldSpec(dim, {Tap{Lag(dim, 0), {1.0, 0.0}}}, kind, sigma);
}

std::int64_t LinearFieldSpec::support_radius() const {
  std::int64_t m = 0;
  for (const auto& tap : taps_)
    for (auto c : tap.lag) m = std::max(m, std::abs(c));
  return m;
}

std::int64_t LinearFieldSpec::support_diameter(std::size_t axis) const { return hi_[axis] - lo_[axis]; }

std::int64_t LinearFieldSpec::dependence_range() const {
  std::int64_t m = 0;
  for (std::size_t s = 0; s < dim_; ++s) m = std::max(m, support_diameter(s));
  return m;
}

LinearFieldSpec LinearFieldSpec::scaled(cplx c) const {
  auto taps = taps_;
  for (auto& tap : taps) tap.coef *= c;
  return LinearFieldSpec(dim_, std::move(taps), kind_, sigma_);
}

FieldSample::FieldSample(BoxDims dims, Lag shift, std::vector<cplx> values, std::uint64_t seed)
    : dims_(std::move(dims)), shift_(std::move(shift)), values_(std::move(values)), seed_(seed) {
  if (shift_.size() != dims_.dim()) throw ValidationError("sample shift dimension mismatch");
  if (values_.size() != static_cast<std::size_t>(dims_.volume())) {
    throw ValidationError("sample holds " + std::to_string(values_.size()) + " values, box needs " +
                          std::to_string(dims_.volume()));
  }
}

Lag FieldSample::absolute_index(std::size_t i) const {
  Lag k = dims_.offset_of(i);
  for (std::size_t s = 0; s < k.size(); ++s) k[s] += 1 + shift_[s];
  return k;
}

cplx FieldSample::at(std::span<const std::int64_t> absolute) const {
  if (absolute.size() != dims_.dim()) throw ValidationError("index dimension mismatch");
  Lag off(absolute.size());
  for (std::size_t s = 0; s < off.size(); ++s) {
    off[s] = absolute[s] - 1 - shift_[s];
    if (off[s] < 0 || off[s] >= dims_[s]) throw ValidationError("index outside sample box");
  }
  return values_[dims_.linear_index(off)];
}

namespace {

cplx transfer(const LinearFieldSpec& spec, std::span<const double> theta) {
  cplx a{0.0, 0.0};
  for (const auto& tap : spec.taps()) {
    double phase = 0.0;
    for (std::size_t s = 0; s < theta.size(); ++s) phase += static_cast<double>(tap.lag[s]) * theta[s];
    a += tap.coef * std::polar(1.0, -phase);
  }
  return a;
}

}  // namespace

double spectral_density_at(const LinearFieldSpec& spec, std::span<const double> theta) {
  if (theta.size() != spec.dim()) throw ValidationError("spectral_density: dimension mismatch");
  const double s2 = spec.innovation_std() * spec.innovation_std();
  return s2 * std::norm(transfer(spec, theta));
}

double spectral_density(const LinearFieldSpec& spec, const Frequency& lambda) {
  return spectral_density_at(spec, lambda.coords());
}

cplx autocovariance(const LinearFieldSpec& spec, std::span<const std::int64_t> h) {
  if (h.size() != spec.dim()) throw ValidationError("autocovariance: dimension mismatch");
  for (std::size_t s = 0; s < h.size(); ++s) {
    if (std::abs(h[s]) > spec.support_diameter(s)) return {0.0, 0.0};
  }
  cplx acc{0.0, 0.0};
  const auto& taps = spec.taps();
  Lag shifted(h.size());
  for (const auto& t : taps) {
    for (std::size_t s = 0; s < h.size(); ++s) shifted[s] = t.lag[s] - h[s];
    for (const auto& u : taps) {
      if (u.lag == shifted) acc += t.coef * std::conj(u.coef);
    }
  }
  return spec.innovation_std() * spec.innovation_std() * acc;
}

cplx pseudo_covariance(const LinearFieldSpec& spec, std::span<const std::int64_t> h) {
  if (!spec.is_real()) return {0.0, 0.0};
  return autocovariance(spec, h);
}

FieldSample generate(const LinearFieldSpec& spec, const BoxDims& dims, const Lag& shift,
                     std::uint64_t seed) {
  const std::size_t d = spec.dim();
  if (dims.dim() != d || shift.size() != d) throw ValidationError("generate: dimension mismatch");

  // Innovation box: absolute indices k - j for k in the sample box and j a tap lag.
  std::vector<std::int64_t> origin(d), sides(d);
  for (std::size_t s = 0; s < d; ++s) {
    origin[s] = 1 + shift[s] - spec.max_lag(s);
    sides[s] = dims[s] + spec.max_lag(s) - spec.min_lag(s);
  }
  const BoxDims ibox(sides);

  const double sigma = spec.innovation_std();
  const bool real = spec.is_real();
  std::vector<cplx> eps(static_cast<std::size_t>(ibox.volume()));
  Lag u(d);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const Lag off = ibox.offset_of(i);
    for (std::size_t s = 0; s < d; ++s) u[s] = origin[s] + off[s];
    const auto [z1, z2] = rng::normal_pair(seed, u);
    eps[i] = real ? cplx{sigma * z1, 0.0} : cplx{z1, z2} * (sigma / std::sqrt(2.0));
  }

  std::vector<cplx> values(static_cast<std::size_t>(dims.volume()), cplx{0.0, 0.0});
  Lag ioff(d);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Lag off = dims.offset_of(i);
    cplx acc{0.0, 0.0};
    for (const auto& tap : spec.taps()) {
      // (k - j) - origin with k = off + 1 + shift.
      for (std::size_t s = 0; s < d; ++s) ioff[s] = off[s] + spec.max_lag(s) - tap.lag[s];
      acc += tap.coef * eps[ibox.linear_index(ioff)];
    }
    values[i] = acc;
  }
  return FieldSample(dims, shift, std::move(values), seed);
}

}  // namespace specfield
