#include "doctest.h"

#include <cmath>
#include <random>

#include "w3lab/classify.hpp"
#include "w3lab/kac.hpp"

using namespace w3lab;

TEST_CASE("classifier examples") {
  for (const double c : {2.0, 3.0, 10.0, 50.0, 98.0}) {
    const auto v = classify(c, 0.0, 0.0);
    CHECK(v.status == Status::Unitary);
    CHECK(v.witness == Witness::VacuumTheorem);
  }
  const auto no = classify(50.0, 0.0, 1.0);
  CHECK(no.status == Status::NotUnitary);
  CHECK(no.witness == Witness::NecessaryConditionFailed);
  const auto cf = classify(200.0, 198.0 / 24.0, 0.0);
  CHECK(cf.status == Status::Unitary);
  CHECK(cf.witness == Witness::ConstructiveFamily);
  REQUIRE(cf.constructive_bound.has_value());
  CHECK(*cf.constructive_bound == 0.0);
  const auto far = classify(200.0, 0.1, 5.0);
  CHECK(far.status == Status::NotUnitary);
  CHECK(far.witness == Witness::NecessaryConditionFailed);
  CHECK_FALSE(far.constructive_bound.has_value());
  CHECK(classify(BigRational(200), rational(1, 10), BigRational(5)).status == Status::NotUnitary);
  CHECK(classify(150.0, 0.0, 0.0).status == Status::Unitary);
  CHECK_THROWS_AS(classify(rational(-22, 5), BigRational(1), BigRational(0)), PoleAtForbiddenCentralCharge);
  CHECK_THROWS_AS(classify(-4.4, 1.0, 0.0), PoleAtForbiddenCentralCharge);
}

TEST_CASE("gap region above c = 98") {
  // satisfies the necessary condition but lies below h = (c-2)/24
  const double c = 200.0;
  const double h = 7.0;
  REQUIRE(first_kac_quantity(c, h, 0.0) > 0.0);
  const auto v = classify(c, h, 0.0);
  CHECK(v.status == Status::Unknown);
  CHECK(v.witness == Witness::OutOfClassifiedRegion);
  const auto above = classify(c, 10.0, 0.0);
  CHECK(above.status == Status::Unitary);
  const double bound = *above.constructive_bound;
  CHECK(classify(c, 10.0, 0.999 * bound).status == Status::Unitary);
  const auto outside = classify(c, 10.0, 1.001 * bound);
  CHECK((outside.status == Status::Unknown || outside.status == Status::NotUnitary));
}

TEST_CASE("below c = 2 is unknown with discrete series metadata") {
  const auto v = classify(0.8, 0.1, 0.0);
  CHECK(v.status == Status::Unknown);
  CHECK(v.discrete_series_m == 4);
  const auto exact = classify(rational(10, 7), BigRational(0), BigRational(0));
  CHECK(exact.status == Status::Unknown);
  CHECK(exact.discrete_series_m == 6);
  CHECK_FALSE(classify(1.0, 0.0, 0.0).discrete_series_m.has_value());
  CHECK_FALSE(classify(BigRational(1), BigRational(0), BigRational(0)).discrete_series_m.has_value());
}

TEST_CASE("boundary points are unitary in exact arithmetic") {
  // at c = 2 the locus is w^2 = (2/9) h^3, e.g. h = 2, w = 4/3
  const auto v = classify(BigRational(2), BigRational(2), rational(4, 3));
  CHECK(v.exact);
  CHECK(v.status == Status::Unitary);
  CHECK(v.f11_minus_w2 == 0.0);
  CHECK(classify(BigRational(2), BigRational(2), rational(4, 3) + rational(1, 1000000)).status == Status::NotUnitary);
}

TEST_CASE("constructive family inside 2 <= c <= 98 is unitary") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> kd(0.0, std::sqrt(8.0)), qd(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double kappa = kd(rng);
    const double q1 = qd(rng);
    const double q2 = qd(rng);
    const double c = 2.0 + 12.0 * kappa * kappa;
    const double b = 4.0 / std::sqrt(22.0 + 5.0 * c);
    const double h = (q1 * q1 + q2 * q2 + kappa * kappa) / 2.0;
    const double w = b * (q2 * q2 * q2 - 3.0 * q1 * q1 * q2) / (3.0 * std::sqrt(2.0));
    REQUIRE(classify(c, h, w).status == Status::Unitary);
  }
}

TEST_CASE("symmetry and monotonicity") {
  for (const double c : {2.0, 10.0, 60.0}) {
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const double h = 0.05 * i;
        const double w = 0.03 * j;
        const auto v = classify(c, h, w);
        REQUIRE((v.status == Status::Unitary) == (classify(c, h, -w).status == Status::Unitary));
        REQUIRE(v.status != Status::Unknown);
        // the vacuum is an isolated unitary point for c > 2
        const bool vacuum = h == 0.0 && w == 0.0;
        if (v.status == Status::Unitary && !vacuum) REQUIRE(classify(c, h + 0.05, w).status == Status::Unitary);
      }
    }
  }
}

TEST_CASE("vacuum is isolated above c = 2") {
  for (const double c : {10.0, 60.0}) {
    CHECK(classify(c, 0.0, 0.0).status == Status::Unitary);
    CHECK(classify(c, 1e-3, 0.0).status == Status::NotUnitary);
    CHECK(classify(c, (c - 2.0) / 32.0, 0.0).status == Status::Unitary);
  }
  CHECK(classify(2.0, 1e-3, 0.0).status == Status::Unitary);
}

TEST_CASE("exact and double verdicts agree off the boundary") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<long> cn(-300, 3000), hn(0, 400), wn(-300, 300);
  for (int i = 0; i < 500; ++i) {
    const BigRational c = rational(cn(rng), 10);
    if (5 * c + 22 == 0) continue;
    const BigRational h = rational(hn(rng), 20);
    const BigRational w = rational(wn(rng), 40);
    const auto e = classify(c, h, w);
    const auto d = classify(c.get_d(), h.get_d(), w.get_d());
    if (std::abs(e.f11_minus_w2) > 1e-9) {
      REQUIRE(e.status == d.status);
      REQUIRE(e.witness == d.witness);
    }
    REQUIRE(first_kac_quantity(c, h, w) == f_mm_minus_w2(1, c, h, w));
  }
}

TEST_CASE("region scan") {
  const auto scan = region_scan(2.0, 0.0, 4.0, -2.0, 2.0, 41);
  REQUIRE(scan.points.size() == 41 * 41);
  for (const auto& p : scan.points) {
    const bool inside = p.w * p.w <= 2.0 / 9.0 * p.h * p.h * p.h + 1e-12;
    const bool clear = std::abs(p.w * p.w - 2.0 / 9.0 * p.h * p.h * p.h) > 1e-9;
    if (clear) REQUIRE((p.status == Status::Unitary) == inside);
  }
  const auto threaded = region_scan(2.0, 0.0, 4.0, -2.0, 2.0, 41, 3);
  CHECK(to_csv(threaded) == to_csv(scan));

  const auto big = region_scan(30.0, 1e3, 1e4, 0.0, 0.0, 5);
  for (const auto& p : big.points) CHECK(p.status == Status::Unitary);

  CHECK_THROWS_AS(region_scan(-4.4, 0.0, 1.0, 0.0, 1.0, 3), PoleAtForbiddenCentralCharge);
  CHECK_THROWS_AS(region_scan(10.0, 0.0, 1.0, 0.0, 1.0, 1), std::invalid_argument);

  const auto csv = to_csv(region_scan(200.0, 0.0, 16.0, 0.0, 1.0, 2));
  CHECK(csv.rfind("c,h,w,status,witness,f11_minus_w2,constructive_bound\r\n", 0) == 0);
  CHECK(csv.find("200,0,0,Unitary,VacuumTheorem,0,\r\n") != std::string::npos);
}

TEST_CASE("verdict JSON") {
  const auto j = to_json(classify(10.0, 1.0, 0.1));
  CHECK(j.at("status") == "Unitary");
  CHECK(j.at("witness") == "FirstKacDeterminant");
  for (const char* key : {"c", "h", "w", "f11MinusW2", "constructiveBound", "discreteSeriesM", "exact"}) {
    CHECK(j.contains(key));
  }
}
