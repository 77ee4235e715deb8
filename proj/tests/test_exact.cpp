#include "doctest.h"

#include <map>
#include <random>

#include "w3lab/exact.hpp"

using namespace w3lab;

namespace {

ExactScalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> exp(0, 2), num(-5, 5), den(1, 4), terms(0, 4), power(0, 2);
  ExactScalar::TermMap map;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    Monomial m{static_cast<std::uint32_t>(exp(rng)), static_cast<std::uint32_t>(exp(rng)),
               static_cast<std::uint32_t>(exp(rng))};
    map[m] += rational(num(rng), den(rng));
  }
  return ExactScalar::from_terms(std::move(map), static_cast<std::uint32_t>(power(rng)));
}

BigRational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  return rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("addition examples") {
  const auto c = ExactScalar::c();
  CHECK((c + (-c)).is_zero());
  const auto inv = ExactScalar::inverse_pole_factor();
  CHECK(inv + inv == ExactScalar(2) * inv);
  CHECK((inv + inv).denom_power() == 1);
  const auto hw = ExactScalar::h() * ExactScalar::w();
  const auto sum = hw + c * c;
  CHECK(sum.numerator().size() == 2);
  CHECK(sum.evaluate(BigRational(3), BigRational(2), BigRational(5)) == BigRational(19));
}

TEST_CASE("multiplication examples") {
  const auto d = ExactScalar::pole_factor();
  const auto prod = d * ExactScalar::inverse_pole_factor();
  CHECK(prod == ExactScalar(1));
  CHECK(prod.denom_power() == 0);
  CHECK(ExactScalar::b_squared() * d * d == ExactScalar(16) * d);
  CHECK((ExactScalar::b_squared() * d * d).denom_power() == 0);
  const auto h = ExactScalar::h();
  CHECK((h * h).to_string() == "h^2");
}

TEST_CASE("evaluation examples") {
  CHECK(ExactScalar::b_squared().evaluate(BigRational(2), BigRational(0), BigRational(0)) == rational(1, 2));
  CHECK((ExactScalar::h() * ExactScalar::w()).evaluate(BigRational(7), BigRational(3), BigRational(4)) == 12);
  CHECK_THROWS_AS(ExactScalar::inverse_pole_factor().evaluate(rational(-22, 5), BigRational(0), BigRational(0)),
                  PoleAtForbiddenCentralCharge);
  CHECK_THROWS_AS(ExactScalar::inverse_pole_factor().evaluate(-4.4, 0.0, 0.0), PoleAtForbiddenCentralCharge);
}

TEST_CASE("ring axioms on random scalars") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_scalar(rng);
    const auto b = random_scalar(rng);
    const auto d = random_scalar(rng);
    REQUIRE((a + b) * d == a * d + b * d);
    REQUIRE(a * b == b * a);
    REQUIRE((a * b) * d == a * (b * d));
    REQUIRE((a - a).is_zero());
  }
}

TEST_CASE("evaluate is a ring homomorphism") {
  std::mt19937_64 rng(12);
  int tested = 0;
  while (tested < 300) {
    const BigRational c = random_rational(rng);
    if (5 * c + 22 == 0) continue;
    const BigRational h = random_rational(rng);
    const BigRational w = random_rational(rng);
    const auto a = random_scalar(rng);
    const auto b = random_scalar(rng);
    REQUIRE((a * b).evaluate(c, h, w) == a.evaluate(c, h, w) * b.evaluate(c, h, w));
    REQUIRE((a + b).evaluate(c, h, w) == a.evaluate(c, h, w) + b.evaluate(c, h, w));
    ++tested;
  }
}

TEST_CASE("canonical form") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_scalar(rng) * random_scalar(rng) + random_scalar(rng);
    REQUIRE(a.canonicalized() == a);
    REQUIRE(a.canonicalized().to_string() == a.to_string());
    REQUIRE(ExactScalar::parse(a.to_string()) == a);
    for (const auto& [m, coeff] : a.numerator()) {
      REQUIRE(coeff != 0);
      REQUIRE(coeff.get_den() > 0);
    }
    if (a.denom_power() > 0) {
      // the numerator must not vanish identically at c = -22/5
      std::map<std::pair<std::uint32_t, std::uint32_t>, BigRational> at_pole;
      for (const auto& [m, coeff] : a.numerator()) {
        BigRational term = coeff;
        for (std::uint32_t k = 0; k < m.c; ++k) term *= rational(-22, 5);
        at_pole[{m.h, m.w}] += term;
      }
      bool nonzero = false;
      for (const auto& [key, value] : at_pole) nonzero = nonzero || value != 0;
      REQUIRE(nonzero);
    }
  }
}

TEST_CASE("exact division and units") {
  const auto d = ExactScalar::pole_factor();
  const auto x = ExactScalar::h() * ExactScalar::c() + ExactScalar::w();
  CHECK((x * d).divide_exact(d) == x);
  CHECK(x.divide_exact(x) == ExactScalar(1));
  CHECK_THROWS_AS(ExactScalar::h().divide_exact(ExactScalar::w()), std::domain_error);
  const auto u = ExactScalar(rational(3, 7)) * d * d;
  REQUIRE(u.unit_inverse().has_value());
  CHECK(*u.unit_inverse() * u == ExactScalar(1));
  CHECK_FALSE(ExactScalar::h().unit_inverse().has_value());
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == rational(1, 2));
  CHECK(parse_rational("-4") == -4);
  CHECK(parse_rational("0.125") == rational(1, 8));
  CHECK(parse_rational("-3e-2") == rational(-3, 100));
  CHECK(to_string(parse_rational("10/4")) == "5/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("h +* w"), ParseError);
}
