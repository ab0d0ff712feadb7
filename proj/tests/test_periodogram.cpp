#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "specfield/error.hpp"
#include "specfield/field.hpp"
#include "specfield/kernels.hpp"
#include "specfield/periodogram.hpp"

using Catch::Approx;
using namespace specfield;

namespace {

// X_k = e^{i k.mu} on the unshifted box.
FieldSample plane_wave(const BoxDims& dims, const std::vector<double>& mu) {
  std::vector<cplx> values(static_cast<std::size_t>(dims.volume()));
  const FieldSample probe(dims, Lag(dims.dim(), 0), values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Lag k = probe.absolute_index(i);
    double phase = 0.0;
    for (std::size_t s = 0; s < k.size(); ++s) phase += static_cast<double>(k[s]) * mu[s];
    values[i] = std::polar(1.0, phase);
  }
  return FieldSample(dims, Lag(dims.dim(), 0), values);
}

std::vector<cplx> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {z(gen), z(gen)};
  return v;
}

}  // namespace

TEST_CASE("zero frequency gives the plain sum", "[periodogram]") {
  const auto values = random_values(12, 1);
  const FieldSample s(BoxDims{3, 4}, Lag{0, 0}, values);
  cplx total{0.0, 0.0};
  for (const auto& x : values) total += x;
  CHECK(std::abs(modulated_sum(s, Frequency{0.0, 0.0}) - total) < 1e-12);
}

TEST_CASE("zero field", "[periodogram]") {
  const FieldSample s(BoxDims{5, 5}, Lag{0, 0}, std::vector<cplx>(25));
  CHECK(modulated_sum(s, Frequency{1.0, 2.0}) == cplx{0.0, 0.0});
  CHECK(periodogram(s, Frequency{1.0, 2.0}) == 0.0);
}

TEST_CASE("plane wave matches the Fejer product", "[periodogram]") {
  const BoxDims v{4, 3};
  const std::vector<double> mu{1.0, 0.5};
  const Frequency lambda{0.2, -0.7};
  const auto s = plane_wave(v, mu);
  const std::vector<double> diff{mu[0] - lambda[0], mu[1] - lambda[1]};
  const double expected = static_cast<double>(v.volume()) * kernels::fejer_product(diff, v);
  CHECK(std::norm(modulated_sum(s, lambda)) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("single spike and self-probe", "[periodogram]") {
  std::vector<cplx> values(20);
  values[0] = 1.0;
  const FieldSample spike(BoxDims{4, 5}, Lag{0, 0}, values);
  CHECK(periodogram(spike, Frequency{0.3, 1.9}) == Approx(1.0 / 20.0));

  const auto wave = plane_wave(BoxDims{6, 7}, {0.8, -1.2});
  CHECK(periodogram(wave, Frequency{0.8, -1.2}) == Approx(42.0).epsilon(1e-12));
}

TEST_CASE("shift changes only the phase", "[periodogram]") {
  const auto values = random_values(30, 2);
  const FieldSample a(BoxDims{5, 6}, Lag{0, 0}, values);
  const FieldSample b(BoxDims{5, 6}, Lag{7, -3}, values);
  const Frequency lambda{1.1, -0.4};
  CHECK(std::abs(modulated_sum(a, lambda)) == Approx(std::abs(modulated_sum(b, lambda))).epsilon(1e-12));
  const cplx ratio = modulated_sum(b, lambda) / modulated_sum(a, lambda);
  CHECK(std::abs(ratio - std::polar(1.0, -(7 * 1.1 + 3 * 0.4))) < 1e-12);
}

TEST_CASE("scaling and bounds", "[periodogram]") {
  const auto values = random_values(64, 3);
  const FieldSample a(BoxDims{8, 8}, Lag{0, 0}, values);
  auto scaled = values;
  const cplx c{1.5, -2.0};
  for (auto& x : scaled) x *= c;
  const FieldSample b(BoxDims{8, 8}, Lag{0, 0}, scaled);
  const Frequency lambda{0.9, 2.2};
  CHECK(periodogram(b, lambda) == Approx(std::norm(c) * periodogram(a, lambda)).epsilon(1e-12));
  double max2 = 0.0;
  for (const auto& x : values) max2 = std::max(max2, std::norm(x));
  CHECK(periodogram(a, lambda) >= 0.0);
  CHECK(periodogram(a, lambda) <= 64.0 * max2);
}

TEST_CASE("periodogram vector", "[periodogram]") {
  const LinearFieldSpec ma(2, {Tap{{0, 0}, {1, 0}}, Tap{{0, 1}, {1, 0}}}, InnovationKind::RealGaussian, 1.0);
  const auto s = generate(ma, BoxDims{16, 16}, Lag{0, 0}, 4);
  const std::vector<Frequency> freqs{{kPi / 2, kPi / 2}, {2.0, kPi / 2}, {2.5, kPi / 2}, {2.0, kPi / 2}};
  const auto out = periodogram_vector(s, freqs);
  REQUIRE(out.size() == 4);
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    CHECK(out[j].sum == modulated_sum(s, freqs[j]));
    CHECK(out[j].value == periodogram(s, freqs[j]));
  }
  CHECK(out[1].sum == out[3].sum);
  CHECK(periodogram_vector(s, std::vector<Frequency>{}).empty());
}

TEST_CASE("dimension mismatch", "[periodogram]") {
  const FieldSample s(BoxDims{3}, Lag{0}, std::vector<cplx>(3));
  CHECK_THROWS_AS(modulated_sum(s, Frequency{0.1, 0.2}), ValidationError);
  const std::vector<Frequency> freqs{{0.1, 0.2}};
  CHECK_THROWS_AS(periodogram_vector(s, freqs), ValidationError);
}

TEST_CASE("iid periodogram mean", "[periodogram]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 1.0);
  const int reps = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double i = periodogram(generate(iid, BoxDims{32, 32}, Lag{0, 0}, 500 + r), Frequency{kPi / 2, kPi / 2});
    sum += i;
    sum2 += i * i;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}
