#include "doctest.h"

#include <cmath>
#include <random>

#include "w3lab/kac.hpp"
#include "w3lab/verma.hpp"

using namespace w3lab;

namespace {

// Display form of f_mm: ((c-2)m^2 - c + 24h + 2)^2 (96h + (c-2)(m^2-4)) / (7776(5c+22)).
BigRational f_mm_display(int m, const BigRational& c, const BigRational& h) {
  const BigRational a = (c - 2) * m * m - c + 24 * h + 2;
  return BigRational(a * a * (96 * h + (c - 2) * (m * m - 4)) / (7776 * (5 * c + 22)));
}

BigRational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> num(lo * den, hi * den);
  return rational(num(rng), den);
}

}  // namespace

TEST_CASE("bicolored partition counts") {
  CHECK(p2(0) == 1);
  CHECK(p2(1) == 2);
  CHECK(p2(2) == 5);
  CHECK(p2(3) == 10);
  CHECK(p2(4) == 20);
  for (int n = 0; n <= 12; ++n) CHECK(p2(n) == p2_brute_force(n));
}

TEST_CASE("Kac factor list") {
  for (int level = 1; level <= 6; ++level) {
    const auto f = kac_factors(level);
    std::size_t expected = 0;
    for (int k = 1; k <= level; ++k) {
      for (int m = 1; m <= k; ++m) expected += k % m == 0 ? 1 : 0;
    }
    CHECK(f.factors.size() == expected);
    for (const auto& x : f.factors) {
      CHECK(x.m * x.n <= level);
      CHECK(x.exponent == p2(level - x.m * x.n));
    }
  }
}

TEST_CASE("alpha invariants") {
  const auto inv = alpha_invariants(BigRational(10));
  CHECK(inv.sum_alpha == rational(40, 96));
  CHECK(inv.prod_alpha == rational(1, 16));
  const auto [a, b] = alpha_squared(10.0);
  CHECK(std::abs((a + b).real() - 40.0 / 96.0) < 1e-14);
  CHECK(std::abs(a * b - std::complex<double>(1.0 / 16.0)) < 1e-14);
  CHECK(std::abs(a - std::conj(b)) < 1e-14);
}

TEST_CASE("diagonal f_mm matches its display form") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const BigRational c = random_rational(rng, -3, 120, 7);
    if (5 * c + 22 == 0) continue;
    const BigRational h = random_rational(rng, -2, 10, 11);
    for (int m = 1; m <= 4; ++m) {
      REQUIRE(f_mm_minus_w2(m, c, h, 0) == f_mm_display(m, c, h));
      REQUIRE(std::abs(f_mn(m, m, h.get_d(), c.get_d()) - f_mm_display(m, c, h).get_d()) <=
              1e-9 * (1 + std::abs(f_mm_display(m, c, h).get_d())));
    }
  }
}

TEST_CASE("f_11 at c = 2 is cubic in h") {
  for (int k = 1; k <= 10; ++k) {
    const BigRational h = rational(k, 3);
    CHECK(f_mm_minus_w2(1, BigRational(2), h, 0) == rational(2, 9) * h * h * h);
  }
}

TEST_CASE("reality of the closed form between c = 2 and c = 98") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> cd(2.001, 97.999), hd(-1.0, 10.0), wd(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double c = cd(rng);
    const double h = hd(rng);
    const double w = wd(rng);
    for (int m = 1; m <= 3; ++m) {
      const auto f = f_mn_complex(m, m, h, c);
      REQUIRE(std::abs(f.imag()) < 1e-10 * (1 + std::abs(f.real())));
    }
    for (const auto& [m, n] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}, std::pair{1, 4}}) {
      CHECK_THROWS_AS(f_mn(m, n, h, c), std::domain_error);
      const auto complex_pair = paired_kac_factor_complex(m, n, c, h, w);
      const double real_pair = paired_kac_factor(m, n, c, h, w);
      const double scale = 1 + std::abs(real_pair);
      REQUIRE(std::abs(complex_pair.imag()) < 1e-10 * scale);
      REQUIRE(std::abs(complex_pair.real() - real_pair) < 1e-10 * scale);
    }
  }
}

TEST_CASE("paired factor exact and double paths agree") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const BigRational c = random_rational(rng, 3, 97, 13);
    const BigRational h = random_rational(rng, 0, 8, 17);
    const BigRational w = random_rational(rng, -1, 1, 19);
    for (const auto& [m, n] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{1, 3}, std::pair{2, 2}}) {
      const double exact = paired_kac_factor(m, n, c, h, w).get_d();
      const double approx = paired_kac_factor(m, n, c.get_d(), h.get_d(), w.get_d());
      REQUIRE(std::abs(exact - approx) <= 1e-9 * (1 + std::abs(exact)));
    }
    const BigRational f = f_mm_minus_w2(2, c, h, w);
    REQUIRE(paired_kac_factor(2, 2, c, h, w) == f * f);
  }
}

TEST_CASE("closed form examples") {
  CHECK(kac_closed_form(0, BigRational(5), BigRational(1), BigRational(2)) == 1);
  const BigRational c(17), h = rational(3, 2), w = rational(1, 5);
  CHECK(kac_closed_form(1, c, h, w) == f_mm_minus_w2(1, c, h, w));
  for (int level = 1; level <= 4; ++level) {
    CHECK(kac_closed_form(level, BigRational(3), rational(1, 24), BigRational(0)) > 0);
    CHECK(kac_closed_form(level, 3.0, 1.0 / 24.0, 0.0) > 0);
  }
}

TEST_CASE("comparison with the Gram determinant") {
  VermaEngine engine;
  std::mt19937_64 rng(8);
  const auto points = random_points_in_region_h(5, rng);
  for (const auto& p : points) {
    CHECK(p.c > 2);
    CHECK(p.c < 98);
    CHECK(f_mm_minus_w2(1, p.c, p.h, p.w) > 0);
  }
  const auto r0 = compare_with_gram(engine, 0, points);
  for (const auto& x : r0.ratios) CHECK(x == 1);
  const auto r1 = compare_with_gram(engine, 1, points);
  CHECK(r1.agrees);
  CHECK(r1.constant_positive);
  CHECK(r1.constant == 9);
  CHECK(r1.verdict() == "constant-positive");
  const auto r2 = compare_with_gram(engine, 2, points);
  CHECK(r2.agrees);
  CHECK(r2.constant_positive);
  CHECK(r2.max_rel_deviation == 0.0);
  const auto j = to_json(r2);
  for (const char* key : {"level", "points", "ratios", "constant", "maxRelDeviation", "verdict"}) CHECK(j.contains(key));

  CHECK_THROWS_AS(compare_with_gram(engine, 1, {{BigRational(10), BigRational(0), BigRational(0)},
                                                  {BigRational(10), BigRational(1), BigRational(0)}}),
                  DegenerateSample);
  CHECK_THROWS_AS(compare_with_gram(engine, 1, {points.front()}), std::invalid_argument);
}

TEST_CASE("sign of det Gram agrees with the closed form") {
  VermaEngine engine;
  std::mt19937_64 rng(9);
  GramMatrix grams[4];
  for (int level = 1; level <= 3; ++level) grams[level] = engine.gram_matrix(level);
  int tested = 0;
  while (tested < 40) {
    const BigRational c = random_rational(rng, -10, 150, 9);
    if (5 * c + 22 == 0) continue;
    const BigRational h = random_rational(rng, -2, 12, 7);
    const BigRational w = random_rational(rng, -3, 3, 5);
    for (int level = 1; level <= 3; ++level) {
      const BigRational closed = kac_closed_form(level, c, h, w);
      if (closed == 0) continue;
      const BigRational det = bareiss_determinant(grams[level].evaluate(c, h, w));
      REQUIRE(sgn(det) == sgn(closed));
    }
    ++tested;
  }
}
