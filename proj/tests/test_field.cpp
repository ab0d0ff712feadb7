#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "specfield/error.hpp"
#include "specfield/field.hpp"

using Catch::Approx;
using namespace specfield;

namespace {

LinearFieldSpec ma1_real() {
  return LinearFieldSpec(1, {Tap{{0}, {1.0, 0.0}}, Tap{{1}, {1.0, 0.0}}}, InnovationKind::RealGaussian, 1.0);
}

oracle::Taps to_oracle(const LinearFieldSpec& spec) {
  oracle::Taps out;
  for (const auto& tap : spec.taps()) out[tap.lag] = tap.coef;
  return out;
}

LinearFieldSpec random_spec(std::mt19937_64& gen, std::size_t d, InnovationKind kind) {
  std::uniform_int_distribution<int> lag(-2, 2);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Tap> taps;
  std::vector<Lag> used;
  const int count = 1 + static_cast<int>(gen() % 4);
  while (static_cast<int>(taps.size()) < count) {
    Lag l(d);
    for (auto& c : l) c = lag(gen);
    if (std::find(used.begin(), used.end(), l) != used.end()) continue;
    used.push_back(l);
    const double im = kind == InnovationKind::RealGaussian ? 0.0 : coef(gen);
    taps.push_back(Tap{l, {coef(gen), im}});
  }
  return LinearFieldSpec(d, taps, kind, 0.5 + std::abs(coef(gen)));
}

}  // namespace

TEST_CASE("spec validation", "[field]") {
  CHECK_THROWS_AS(LinearFieldSpec(1, {}, InnovationKind::RealGaussian, 1.0), ValidationError);
  CHECK_THROWS_AS(LinearFieldSpec(1, {Tap{{0}, {1.0, 0.5}}}, InnovationKind::RealGaussian, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(LinearFieldSpec(1, {Tap{{0}, {1.0, 0.0}}, Tap{{0}, {2.0, 0.0}}},
                                  InnovationKind::RealGaussian, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(LinearFieldSpec(2, {Tap{{0}, {1.0, 0.0}}}, InnovationKind::RealGaussian, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(LinearFieldSpec(5, {Tap{{0, 0, 0, 0, 0}, {1.0, 0.0}}}, InnovationKind::RealGaussian, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(LinearFieldSpec(1, {Tap{{0}, {1.0, 0.0}}}, InnovationKind::RealGaussian, -1.0),
                  ValidationError);
}

TEST_CASE("support geometry", "[field]") {
  const LinearFieldSpec spec(2, {Tap{{0, 0}, {1, 0}}, Tap{{-1, 2}, {1, 0}}, Tap{{1, 1}, {1, 0}}},
                             InnovationKind::CircularComplexGaussian, 1.0);
  CHECK(spec.support_radius() == 2);
  CHECK(spec.support_diameter(0) == 2);
  CHECK(spec.support_diameter(1) == 2);
  CHECK(spec.dependence_range() == 2);
  CHECK(ma1_real().dependence_range() == 1);
}

TEST_CASE("spectral density hand values", "[field]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian);
  CHECK(spectral_density(iid, Frequency{0.3, -2.0}) == Approx(1.0));
  CHECK(spectral_density(iid, Frequency{kPi, kPi}) == Approx(1.0));
  const auto ma = ma1_real();
  CHECK(spectral_density(ma, Frequency{0.0}) == Approx(4.0));
  CHECK(spectral_density(ma, Frequency{kPi}) == Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(spectral_density(ma, Frequency{0.1, 0.2}), ValidationError);
}

TEST_CASE("spectral density equals the lag-sum", "[field]") {
  const auto ma = ma1_real();
  const auto taps = to_oracle(ma);
  for (int i = 0; i < 64; ++i) {
    const double l = -kPi + 2.0 * kPi * (i + 1) / 64.0;
    CHECK(spectral_density(ma, Frequency{l}) ==
          Approx(oracle::density_from_lags(taps, 1.0, {l})).margin(1e-10));
  }
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int rep = 0; rep < 30; ++rep) {
    const auto spec = random_spec(gen, 1 + rep % 3, InnovationKind::CircularComplexGaussian);
    std::vector<double> lambda(spec.dim());
    for (auto& x : lambda) x = angle(gen);
    CHECK(spectral_density(spec, Frequency(lambda)) ==
          Approx(oracle::density_from_lags(to_oracle(spec), spec.innovation_std(), lambda)).margin(1e-10));
  }
}

TEST_CASE("autocovariance hand values", "[field]") {
  const auto iid = LinearFieldSpec::iid(1, InnovationKind::RealGaussian, 1.5);
  CHECK(autocovariance(iid, Lag{0}).real() == Approx(2.25));
  CHECK(std::abs(autocovariance(iid, Lag{1})) == 0.0);
  const auto ma = ma1_real();
  CHECK(autocovariance(ma, Lag{0}).real() == 2.0);
  CHECK(autocovariance(ma, Lag{1}).real() == 1.0);
  CHECK(autocovariance(ma, Lag{-1}).real() == 1.0);
  CHECK(std::abs(autocovariance(ma, Lag{2})) == 0.0);
}

TEST_CASE("autocovariance against the brute-force sum", "[field]") {
  std::mt19937_64 gen(22);
  for (int rep = 0; rep < 40; ++rep) {
    const auto spec = random_spec(gen, 1 + rep % 3, InnovationKind::CircularComplexGaussian);
    const auto taps = to_oracle(spec);
    std::uniform_int_distribution<int> lag(-5, 5);
    for (int i = 0; i < 10; ++i) {
      Lag h(spec.dim());
      for (auto& c : h) c = lag(gen);
      Lag neg(h);
      for (auto& c : neg) c = -c;
      const cplx r = autocovariance(spec, h);
      CHECK(std::abs(r - oracle::autocov(taps, spec.innovation_std(), h)) < 1e-12);
      CHECK(std::abs(autocovariance(spec, neg) - std::conj(r)) < 1e-12);
    }
  }
}

TEST_CASE("pseudo covariance", "[field]") {
  const auto ma = ma1_real();
  CHECK(pseudo_covariance(ma, Lag{1}) == autocovariance(ma, Lag{1}));
  const auto circ = LinearFieldSpec::iid(1, InnovationKind::CircularComplexGaussian);
  CHECK(pseudo_covariance(circ, Lag{0}) == cplx{0.0, 0.0});
}

TEST_CASE("zero innovation std gives a zero sample", "[field]") {
  const auto spec = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 0.0);
  const auto sample = generate(spec, BoxDims{4, 5}, Lag{0, 0}, 3);
  for (const auto& x : sample.values()) CHECK(x == cplx{0.0, 0.0});
}

TEST_CASE("generation is deterministic", "[field]") {
  const auto ma = ma1_real();
  const auto a = generate(ma, BoxDims{50}, Lag{0}, 77);
  const auto b = generate(ma, BoxDims{50}, Lag{0}, 77);
  const auto c = generate(ma, BoxDims{50}, Lag{0}, 78);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
  CHECK(a.seed() == 77);
}

TEST_CASE("shifted boxes agree with an enlarged box", "[field]") {
  const LinearFieldSpec spec(2, {Tap{{0, 0}, {1, 0.2}}, Tap{{1, -1}, {0.5, 0}}, Tap{{0, 2}, {-0.3, 0.1}}},
                             InnovationKind::CircularComplexGaussian, 1.0);
  const auto big = generate(spec, BoxDims{10, 12}, Lag{0, 0}, 5);
  const Lag shift{3, 4};
  const auto small = generate(spec, BoxDims{5, 6}, shift, 5);
  for (std::size_t i = 0; i < small.size(); ++i) {
    const Lag k = small.absolute_index(i);
    CHECK(small.values()[i] == big.at(k));
  }
}

TEST_CASE("iid field moments", "[field]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 1.0);
  const int reps = 200;
  const double count = reps * 4096.0;
  cplx mean{0.0, 0.0};
  double second = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto s = generate(iid, BoxDims{64, 64}, Lag{0, 0}, 1000 + r);
    for (const auto& x : s.values()) {
      mean += x;
      second += std::norm(x);
    }
  }
  mean /= count;
  CHECK(std::abs(mean.real()) < 3.0 * std::sqrt(0.5 / count));
  CHECK(std::abs(mean.imag()) < 3.0 * std::sqrt(0.5 / count));
  CHECK(second / count == Approx(1.0).epsilon(0.05));
}

TEST_CASE("empirical autocovariance matches and vanishes past the support", "[field]") {
  const LinearFieldSpec spec(1, {Tap{{0}, {1.0, 0.0}}, Tap{{1}, {0.6, 0.0}}, Tap{{2}, {-0.4, 0.0}}},
                             InnovationKind::RealGaussian, 1.0);
  const std::int64_t n = 200000;
  const auto s = generate(spec, BoxDims{n}, Lag{0}, 9);
  const auto& x = s.values();
  for (std::int64_t h = 0; h <= 4; ++h) {
    double acc = 0.0;
    for (std::int64_t k = 0; k + h < n; ++k) acc += (x[k + h] * std::conj(x[k])).real();
    const double est = acc / static_cast<double>(n - h);
    const double truth = autocovariance(spec, Lag{h}).real();
    CHECK(est == Approx(truth).margin(5.0 * 1.6 / std::sqrt(static_cast<double>(n))));
  }
}

TEST_CASE("sample container checks", "[field]") {
  CHECK_THROWS_AS(FieldSample(BoxDims{3}, Lag{0}, std::vector<cplx>(2)), ValidationError);
  CHECK_THROWS_AS(FieldSample(BoxDims{3}, Lag{0, 0}, std::vector<cplx>(3)), ValidationError);
  const FieldSample s(BoxDims{2, 3}, Lag{1, -1}, std::vector<cplx>(6));
  CHECK(s.absolute_index(0) == Lag{2, 0});
  CHECK(s.absolute_index(5) == Lag{3, 2});
  CHECK_THROWS_AS(s.at(Lag{1, 0}), ValidationError);
  CHECK_THROWS_AS(generate(ma1_real(), BoxDims{4}, Lag{std::int64_t{1} << 40}, 1), ValidationError);
}
