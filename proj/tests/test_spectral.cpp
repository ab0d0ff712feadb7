#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "specfield/error.hpp"
#include "specfield/field.hpp"
#include "specfield/periodogram.hpp"
#include "specfield/spectral.hpp"

using Catch::Approx;
using namespace specfield;
using namespace specfield::spectral;

namespace {

LinearFieldSpec ma1_real() {
  return LinearFieldSpec(1, {Tap{{0}, {1, 0}}, Tap{{1}, {1, 0}}}, InnovationKind::RealGaussian, 1.0);
}

LinearFieldSpec complex_2d() {
  return LinearFieldSpec(2, {Tap{{0, 0}, {1.0, 0.0}}, Tap{{1, 0}, {0.5, 0.3}}, Tap{{0, 1}, {0.0, -0.4}}},
                         InnovationKind::CircularComplexGaussian, 1.5);
}

oracle::Taps to_oracle(const LinearFieldSpec& spec) {
  oracle::Taps out;
  for (const auto& tap : spec.taps()) out[tap.lag] = tap.coef;
  return out;
}

}  // namespace

TEST_CASE("exact expectation hand values", "[spectral]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 1.3);
  CHECK(expected_periodogram_exact(iid, Frequency{0.4, -2.0}, BoxDims{5, 9}) == Approx(1.69));
  CHECK(expected_periodogram_exact(ma1_real(), Frequency{0.0}, BoxDims{2}) == Approx(3.0));
  CHECK(expected_periodogram_exact(ma1_real(), Frequency{1.0}, BoxDims{8}) ==
        Approx(2.9455290352692445).epsilon(1e-13));
  // numpy double sum
  CHECK(expected_periodogram_exact(complex_2d(), Frequency{0.9, -2.1}, BoxDims{5, 7}) ==
        Approx(7.125371026115562).epsilon(1e-12));
}

TEST_CASE("exact expectation equals the brute-force double sum", "[spectral]") {
  const auto spec = complex_2d();
  const auto taps = to_oracle(spec);
  for (const auto& lam : std::vector<std::vector<double>>{{0.9, -2.1}, {kPi, 0.0}, {-1.0, 3.0}}) {
    for (const auto& v : std::vector<std::vector<std::int64_t>>{{1, 1}, {3, 4}, {6, 2}}) {
      const double brute = oracle::covariance_double_sum(taps, 1.5, lam, lam, v).real();
      CHECK(expected_periodogram_exact(spec, Frequency(lam), BoxDims(v)) == Approx(brute).epsilon(1e-11));
    }
  }
}

TEST_CASE("quadrature agrees with the exact value", "[spectral]") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t d = 1 + rep % 2;
    Lag lag(d, 0);
    lag[d - 1] = 1;
    const LinearFieldSpec spec(d, {Tap{Lag(d, 0), {1.0, 0.0}}, Tap{lag, {u(gen), u(gen)}}},
                               InnovationKind::CircularComplexGaussian, 1.0 + 0.5 * u(gen));
    std::vector<double> lam(d);
    for (auto& x : lam) x = angle(gen);
    const BoxDims v = d == 1 ? BoxDims{13} : BoxDims{6, 9};
    const double exact = expected_periodogram_exact(spec, Frequency(lam), v);
    CHECK(expected_periodogram_quadrature(spec, Frequency(lam), v, 4 * v.max_side()) ==
          Approx(exact).margin(1e-6));
  }
}

TEST_CASE("quadrature basics", "[spectral]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::RealGaussian, 2.0);
  CHECK(expected_periodogram_quadrature(iid, Frequency{0.5, 0.5}, BoxDims{8, 8}, 32) ==
        Approx(4.0).margin(1e-6));
  CHECK_THROWS_AS(expected_periodogram_quadrature(iid, Frequency{0.5, 0.5}, BoxDims{8, 8}, 31),
                  ValidationError);
}

TEST_CASE("quadrature is linear in the density", "[spectral]") {
  const auto spec = complex_2d();
  const Frequency lam{0.3, 1.2};
  const BoxDims v{5, 6};
  const double base = expected_periodogram_quadrature(spec, lam, v, 24);
  const double scaled = expected_periodogram_quadrature(spec.scaled({0.0, 2.0}), lam, v, 24);
  CHECK(scaled == Approx(4.0 * base).margin(1e-8));
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 1.0);
  // a_0 = 1, a_1 = i gives f = 2 + 2 sin(theta_2).
  const LinearFieldSpec shifted(2, {Tap{{0, 0}, {1, 0}}, Tap{{0, 1}, {0, 1}}},
                                InnovationKind::CircularComplexGaussian, 1.0);
  const double odd = expected_periodogram_quadrature(shifted, lam, v, 24) -
                     2.0 * expected_periodogram_quadrature(iid, lam, v, 24);
  CHECK(odd == Approx(expected_periodogram_exact(shifted, lam, v) - 2.0).margin(1e-8));
}

TEST_CASE("covariance of sums", "[spectral]") {
  const auto spec = complex_2d();
  const Frequency lam{0.9, -2.1}, mu{1.3, -1.7};
  const BoxDims v{5, 7};
  const cplx c = covariance_of_sums(spec, lam, mu, v);
  CHECK(c.real() == Approx(-4.193919166786555).epsilon(1e-11));
  CHECK(c.imag() == Approx(1.4910633753262599).epsilon(1e-11));
  CHECK(std::abs(covariance_of_sums(spec, mu, lam, v) - std::conj(c)) < 1e-12);
  const cplx same = covariance_of_sums(spec, lam, lam, v);
  CHECK(same.real() == Approx(expected_periodogram_exact(spec, lam, v)).epsilon(1e-12));
  CHECK(std::abs(same.imag()) < 1e-10);

  const auto taps = to_oracle(spec);
  const std::vector<double> l{-0.2, 2.9}, m{0.7, 0.1};
  const cplx brute = oracle::covariance_double_sum(taps, 1.5, l, m, {4, 3});
  CHECK(std::abs(covariance_of_sums(spec, Frequency(l), Frequency(m), BoxDims{4, 3}) - brute) < 1e-11);
}

TEST_CASE("iid sums at distinct Fourier frequencies are uncorrelated", "[spectral]") {
  const auto iid = LinearFieldSpec::iid(2, InnovationKind::CircularComplexGaussian, 1.0);
  const Frequency lam{0.5, 0.5}, mu{0.5 + kPi / 2, 0.5};
  CHECK(std::abs(covariance_of_sums(iid, lam, mu, BoxDims{4, 4})) < 1e-14);
  const auto taps = to_oracle(iid);
  CHECK(std::abs(oracle::covariance_double_sum(taps, 1.0, lam.coords(), mu.coords(), {4, 4})) < 1e-14);
}

TEST_CASE("product of sums", "[spectral]") {
  const auto circ = complex_2d();
  CHECK(product_of_sums(circ, Frequency{0.3, 0.3}, Frequency{0.3, 0.3}, BoxDims{8, 8}) == cplx{0.0, 0.0});

  const auto real_iid = LinearFieldSpec::iid(1, InnovationKind::RealGaussian, 1.0);
  // v = 2: (e^{-i pi} + e^{-2 i pi}) / 2 = 0
  const cplx p2 = product_of_sums(real_iid, Frequency{kPi / 2}, Frequency{kPi / 2}, BoxDims{2});
  CHECK(std::abs(p2) < 1e-15);
  const cplx p3 = product_of_sums(real_iid, Frequency{kPi / 2}, Frequency{kPi / 2}, BoxDims{3});
  CHECK(std::abs(p3 - oracle::product_double_sum(to_oracle(real_iid), 1.0, {kPi / 2}, {kPi / 2}, {3})) < 1e-14);

  const auto ma = ma1_real();
  const auto taps = to_oracle(ma);
  for (std::int64_t n : {1, 5, 12}) {
    const cplx brute = oracle::product_double_sum(taps, 1.0, {1.1}, {-0.4}, {n});
    CHECK(std::abs(product_of_sums(ma, Frequency{1.1}, Frequency{-0.4}, BoxDims{n}) - brute) < 1e-12);
  }
  const double at16 = std::abs(product_of_sums(ma, Frequency{kPi / 2}, Frequency{kPi / 2}, BoxDims{16}));
  const double at64 = std::abs(product_of_sums(ma, Frequency{kPi / 2}, Frequency{kPi / 2}, BoxDims{64}));
  CHECK(at64 < 0.5 * at16);
}

TEST_CASE("torus grid", "[spectral]") {
  const auto g = torus_grid(4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == Approx(-kPi / 2));
  CHECK(g[1] == Approx(0.0).margin(1e-15));
  CHECK(g[3] == kPi);
}

TEST_CASE("uniform convergence report", "[spectral]") {
  const auto iid = LinearFieldSpec::iid(1, InnovationKind::CircularComplexGaussian, 1.0);
  const std::vector<BoxDims> seq{{8}, {16}, {64}};
  const auto flat = uniform_convergence_report(iid, seq, 64);
  for (const auto& row : flat.rows) CHECK(row.sup_err < 1e-10);

  const auto ma = ma1_real();
  const auto rep = uniform_convergence_report(ma, seq, 128);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[2].sup_err < rep.rows[0].sup_err);
  // sup |E I - f| = 2 r(1) / v for this field
  CHECK(rep.rows[0].sup_err == Approx(2.0 / 8.0).epsilon(1e-12));
  for (const auto& row : rep.rows) CHECK(std::isfinite(row.sup_err));

  std::ostringstream csv;
  write_report_csv(csv, rep);
  CHECK(csv.str().rfind("n,v,sup_err\n1,8,", 0) == 0);

  const std::vector<BoxDims> bad{{16}, {8}};
  CHECK_THROWS_AS(uniform_convergence_report(ma, bad, 16), ValidationError);
}

TEST_CASE("Monte Carlo mean matches the exact expectation", "[spectral]") {
  const LinearFieldSpec ma(2, {Tap{{0, 0}, {1, 0}}, Tap{{1, 0}, {0.7, 0}}, Tap{{0, 1}, {-0.5, 0}}},
                           InnovationKind::RealGaussian, 1.0);
  const Frequency lam{1.0, -0.6};
  const BoxDims v{12, 12};
  const int reps = 2000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double i = periodogram(generate(ma, v, Lag{0, 0}, 9000 + r), lam);
    s += i;
    s2 += i * i;
  }
  const double mean = s / reps;
  const double se = std::sqrt((s2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - expected_periodogram_exact(ma, lam, v)) < 3.0 * se);
}
