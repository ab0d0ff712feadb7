#include "specfield/blocking.hpp"

#include <cmath>
#include <string>

#include "specfield/error.hpp"
#include "specfield/parallel.hpp"
#include "specfield/rng.hpp"

namespace specfield::blocking {

void MixingProfile::validate() const {
  double prev = 1.0;
  for (const auto& [n, rho] : values) {
    if (n < 1) throw ValidationError("mixing profile lags start at 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("mixing profile values must lie in [0, 1]");
    if (rho > prev) throw ValidationError("mixing profile must be nonincreasing");
    prev = rho;
  }
  if (dependence_range && *dependence_range < 0) throw ValidationError("dependence range must be >= 0");
}

double MixingProfile::at(std::int64_t n) const {
  if (dependence_range && n > *dependence_range) return 0.0;
  auto it = values.upper_bound(n);
  if (it == values.begin()) {
    throw ValidationError("mixing profile has no value at or below lag " + std::to_string(n));
  }
  return std::prev(it)->second;
}

MixingProfile MixingProfile::m_dependent(std::int64_t range) {
  MixingProfile profile;
  for (std::int64_t n = 1; n <= range; ++n) profile.values[n] = 1.0;
  profile.values[range + 1] = 0.0;
  profile.dependence_range = range;
  return profile;
}

namespace {

std::int64_t floor_cbrt(std::int64_t v) {
  auto s = static_cast<std::int64_t>(std::cbrt(static_cast<double>(v)));
  while ((s + 1) * (s + 1) * (s + 1) <= v) ++s;
  while (s * s * s > v) --s;
  return s;
}

// floor(1 / sqrt(rho)) for rho in (0, 1], capped at `cap`.
std::int64_t floor_inv_sqrt(double rho, std::int64_t cap) {
  const double approx = 1.0 / std::sqrt(rho);
  if (approx >= static_cast<double>(cap)) return cap;
  auto c = static_cast<std::int64_t>(approx);
  while (static_cast<double>((c + 1) * (c + 1)) * rho <= 1.0) ++c;
  while (c > 0 && static_cast<double>(c * c) * rho > 1.0) --c;
  return c;
}

}  // namespace

BlockingPlan plan(std::int64_t v1, const MixingProfile& profile, double q) {
  if (v1 < 8) throw ValidationError("blocking needs v1 >= 8");
  if (v1 > (std::int64_t{1} << 40)) throw ValidationError("v1 too large");
  if (!(q > 0.0 && q < 0.25)) throw ValidationError("truncation exponent q must satisfy 0 < q < 1/4");
  profile.validate();
  BlockingPlan out{v1, floor_cbrt(v1), 0, 0, q};
  const double rho = profile.at(out.s);
  out.p = rho == 0.0 ? out.s : std::min(out.s, floor_inv_sqrt(rho, out.s));
  if (out.p < 1) throw ValidationError("profile yields no big slices");
  // (r - 1 + s) p <= v1 < (r + s) p  <=>  r - 1 + s = floor(v1 / p).
  out.r = v1 / out.p - out.s + 1;
  if (out.r < 1) {
    throw ValidationError("no positive big-slice width r for v1 = " + std::to_string(v1));
  }
  return out;
}

std::int64_t BlockSets::block_cardinality(std::size_t l) const {
  std::int64_t inner = dims.volume() / dims[0];
  return blocks.at(l).width() * inner;
}

std::int64_t BlockSets::leftover_cardinality() const {
  std::int64_t inner = dims.volume() / dims[0];
  std::int64_t total = 0;
  for (const auto& slab : leftover) total += slab.width() * inner;
  return total;
}

std::vector<std::size_t> BlockSets::indices(std::span<const Slab> slabs) const {
  const auto inner = static_cast<std::size_t>(dims.volume() / dims[0]);
  std::vector<std::size_t> out;
  for (const auto& slab : slabs) {
    for (std::int64_t k1 = slab.first; k1 <= slab.last; ++k1) {
      const auto base = static_cast<std::size_t>(k1 - 1) * inner;
      for (std::size_t j = 0; j < inner; ++j) out.push_back(base + j);
    }
  }
  return out;
}

BlockSets block_index_sets(const BlockingPlan& plan, const BoxDims& dims) {
  if (dims[0] != plan.v1) throw ValidationError("plan v1 does not match the first box side");
  if (plan.s < 0 || plan.p < 1 || plan.r < 1) throw ValidationError("malformed blocking plan");
  if (plan.p * plan.r + (plan.p - 1) * plan.s > plan.v1) {
    throw ValidationError("blocks do not fit inside the box");
  }
  BlockSets sets{dims, {}, {}};
  std::int64_t cursor = 1;
  for (std::int64_t l = 1; l <= plan.p; ++l) {
    const Slab block{(l - 1) * (plan.r + plan.s) + 1, l * plan.r + (l - 1) * plan.s};
    if (block.first > cursor) sets.leftover.push_back({cursor, block.first - 1});
    sets.blocks.push_back(block);
    cursor = block.last + 1;
  }
  if (cursor <= plan.v1) sets.leftover.push_back({cursor, plan.v1});
  return sets;
}

double index_product(std::span<const std::int64_t> k) {
  double p = 1.0;
  for (auto c : k) p *= static_cast<double>(c);
  return p;
}

cplx truncation_centering(const LinearFieldSpec&, double) {
  // Centered Gaussian laws are invariant under X -> -X and the indicator depends on |X|.
  return {0.0, 0.0};
}

double truncated_second_moment(const LinearFieldSpec& spec, double threshold) {
  const double variance = autocovariance(spec, Lag(spec.dim(), 0)).real();
  if (variance <= 0.0 || threshold <= 0.0) return 0.0;
  if (spec.is_real()) {
    const double z = threshold / std::sqrt(variance);
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
    return variance * (std::erf(z / std::sqrt(2.0)) - 2.0 * z * density);
  }
  // |X|^2 is exponential with mean variance for a circular complex Gaussian.
  const double u = threshold * threshold / variance;
  return variance * (1.0 - std::exp(-u) * (1.0 + u));
}

TruncatedField truncate(const LinearFieldSpec& spec, const FieldSample& sample,
                        const Frequency& lambda, double q) {
  if (!(q > 0.0 && q < 0.25)) throw ValidationError("truncation exponent q must satisfy 0 < q < 1/4");
  const auto& dims = sample.dims();
  if (lambda.dim() != dims.dim()) throw ValidationError("truncate: dimension mismatch");
  for (std::size_t s = 0; s < dims.dim(); ++s) {
    if (1 + sample.shift()[s] < 1) throw ValidationError("truncation needs positive index coordinates");
  }
  TruncatedField out{dims, q, std::vector<cplx>(sample.size()), std::vector<cplx>(sample.size())};
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Lag k = sample.absolute_index(i);
    double phase = 0.0;
    for (std::size_t s = 0; s < k.size(); ++s) phase += static_cast<double>(k[s]) * lambda[s];
    const cplx rotation = std::polar(1.0, -phase);
    const cplx x = sample.values()[i];
    const double threshold = std::pow(index_product(k), q);
    const cplx centering = rotation * truncation_centering(spec, threshold);
    if (std::abs(x) <= threshold) {
      out.bounded[i] = rotation * x - centering;
      out.tail[i] = centering;  // -E[X^lambda 1{|X| > t}] = +E[X^lambda 1{|X| <= t}]
    } else {
      out.bounded[i] = -centering;
      out.tail[i] = rotation * x + centering;
    }
  }
  return out;
}

namespace {

struct MomentPair {
  double mean;
  double se;
};

MomentPair mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// (1/V) sum_{k in Z(n)} E[G_k^2] and (1/V) sum_j sum_k E|T_k|^2 for independent sites.
std::pair<double, double> iid_exact(const LinearFieldSpec& spec, const BlockSets& sets,
                                    std::span<const Frequency> freqs, const stats::WeightVector& bv,
                                    double q) {
  const auto& dims = sets.dims;
  const double volume = static_cast<double>(dims.volume());
  const double variance = autocovariance(spec, Lag(spec.dim(), 0)).real();
  std::vector<bool> in_leftover(static_cast<std::size_t>(dims.volume()), false);
  for (auto i : sets.indices(sets.leftover)) in_leftover[i] = true;

  double leftover = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < in_leftover.size(); ++i) {
    Lag k = dims.offset_of(i);
    for (auto& c : k) c += 1;
    const double bounded2 = truncated_second_moment(spec, std::pow(index_product(k), q));
    tail += static_cast<double>(freqs.size()) * (variance - bounded2);
    if (!in_leftover[i]) continue;
    if (spec.is_real()) {
      double w = 0.0;
      for (std::size_t j = 0; j < freqs.size(); ++j) {
        double phase = 0.0;
        for (std::size_t s = 0; s < k.size(); ++s) phase += static_cast<double>(k[s]) * freqs[j][s];
        w += bv.a(j) * std::cos(phase) - bv.b(j) * std::sin(phase);
      }
      leftover += bounded2 * w * w;
    } else {
      cplx w{0.0, 0.0};
      for (std::size_t j = 0; j < freqs.size(); ++j) {
        double phase = 0.0;
        for (std::size_t s = 0; s < k.size(); ++s) phase += static_cast<double>(k[s]) * freqs[j][s];
        w += cplx{bv.a(j), -bv.b(j)} * std::polar(1.0, -phase);
      }
      leftover += 0.5 * std::norm(w) * bounded2;
    }
  }
  return {leftover / volume, tail / volume};
}

}  // namespace

std::vector<NegligibilityRow> negligibility_report(const LinearFieldSpec& spec,
                                                   const NegligibilityConfig& config) {
  if (config.replications < 2) throw ValidationError("need at least 2 replications");
  if (config.weights.m() != config.scheme.m) throw ValidationError("weight vector length does not match m");
  validate_dims_sequence(config.dims_sequence);
  const auto scheme = build_scheme(config.scheme, config.dims_sequence);

  std::vector<NegligibilityRow> rows;
  for (std::size_t n = 0; n < config.dims_sequence.size(); ++n) {
    const auto& dims = config.dims_sequence[n];
    if (dims.dim() != spec.dim()) throw ValidationError("dims dimension does not match the spec");
    const auto bplan = plan(dims[0], config.profile, config.q);
    const auto sets = block_index_sets(bplan, dims);
    const auto leftover_idx = sets.indices(sets.leftover);
    const auto& freqs = scheme.per_n[n];
    const double volume = static_cast<double>(dims.volume());
    const std::uint64_t stream = rng::derive_seed(config.seed, n + 1);

    std::vector<double> leftover_sq(config.replications), tail_sq(config.replications);
    parallel_for(config.replications, [&](std::size_t i) {
      const auto sample = generate(spec, dims, Lag(dims.dim(), 0), rng::derive_seed(stream, i));
      std::vector<cplx> leftover_sums(freqs.size()), tails(freqs.size());
      for (std::size_t j = 0; j < freqs.size(); ++j) {
        const auto parts = truncate(spec, sample, freqs[j], config.q);
        cplx acc{0.0, 0.0};
        for (auto idx : leftover_idx) acc += parts.bounded[idx];
        leftover_sums[j] = acc;
        cplx z{0.0, 0.0};
        for (const auto& t : parts.tail) z += t;
        tails[j] = z;
      }
      // G is linear, so summing G over Z(n) equals G of the per-frequency sums.
      const double g = stats::g_functional(config.weights, leftover_sums);
      leftover_sq[i] = g * g / volume;
      double t2 = 0.0;
      for (const auto& z : tails) t2 += std::norm(z);
      tail_sq[i] = t2 / volume;
    });

    const auto left = mean_se(leftover_sq);
    const auto tail = mean_se(tail_sq);
    NegligibilityRow row{n + 1, dims, bplan, sets.leftover_cardinality(), left.mean, left.se,
                         tail.mean, tail.se, std::nullopt, std::nullopt};
    if (spec.taps().size() == 1) {
      const auto [le, te] = iid_exact(spec, sets, freqs, config.weights, config.q);
      row.leftover_exact = le;
      row.tail_exact = te;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace specfield::blocking
