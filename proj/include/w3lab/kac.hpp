#pragma once

// Closed-form Kac determinant of the W3 Verma module and its comparison with
// exact Gram determinants.
//
//   det M_N  ~  prod_{k=1..N} prod_{mn=k} (f_mn(h,c) - w^2)^{P2(N-k)}
//
// f_mn is written in terms of A = alpha_+^2 and B = alpha_-^2, which are complex
// conjugates for 2 < c < 98. Products that are symmetric in (A, B) are
// evaluated exactly through A + B = (50-c)/96 and AB = 1/16.

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "w3lab/exact.hpp"
#include "w3lab/verma.hpp"

namespace w3lab {

/// Number of bicolored partitions of n.
std::uint64_t p2(int n);
/// Brute-force count of pairs of partitions with total n (reference implementation).
std::uint64_t p2_brute_force(int n);

struct KacFactor {
  int m = 0;
  int n = 0;
  std::uint64_t exponent = 0;
};

struct KacFactors {
  int level = 0;
  std::vector<KacFactor> factors;
};

KacFactors kac_factors(int level);

struct AlphaInvariants {
  BigRational sum_alpha;   // alpha_+^2 + alpha_-^2
  BigRational prod_alpha;  // alpha_+^2 alpha_-^2
};

AlphaInvariants alpha_invariants(const BigRational& c);

/// (alpha_+^2, alpha_-^2) by complex arithmetic.
std::pair<std::complex<double>, std::complex<double>> alpha_squared(double c);

std::complex<double> f_mn_complex(int m, int n, double h, double c);

/// Real value of f_mn. For m != n and 2 < c < 98 the value is not real and a
/// std::domain_error is raised; use paired_kac_factor instead.
double f_mn(int m, int n, double h, double c);

/// f_mm(h,c) - w^2 in closed form, exact.
BigRational f_mm_minus_w2(int m, const BigRational& c, const BigRational& h, const BigRational& w);

/// (f_mn - w^2)(f_nm - w^2) via the symmetric-function rewrite. For m == n this
/// is (f_mm - w^2)^2.
BigRational paired_kac_factor(int m, int n, const BigRational& c, const BigRational& h,
                              const BigRational& w);
double paired_kac_factor(int m, int n, double c, double h, double w);
/// The same product through complex alpha_+^2, alpha_-^2.
std::complex<double> paired_kac_factor_complex(int m, int n, double c, double h, double w);

BigRational kac_closed_form(int level, const BigRational& c, const BigRational& h,
                            const BigRational& w);
double kac_closed_form(int level, double c, double h, double w);

class DegenerateSample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ComparisonReport {
  int level = 0;
  std::vector<RationalPoint> points;
  std::vector<BigRational> ratios;
  BigRational constant;
  double max_rel_deviation = 0.0;
  double tolerance = 1e-8;
  bool constant_positive = false;
  bool agrees = false;

  std::string verdict() const;
};

nlohmann::json to_json(const ComparisonReport& r);

/// Ratios det(Gram_N at point) / kac_closed_form(N, point), in exact arithmetic.
ComparisonReport compare_with_gram(const GramMatrix& gram, const std::vector<RationalPoint>& points,
                                   double tolerance = 1e-8);
ComparisonReport compare_with_gram(VermaEngine& engine, int level,
                                   const std::vector<RationalPoint>& points, double tolerance = 1e-8);

/// Random rational points with 2 < c < 98 and f_11 - w^2 > 0.
std::vector<RationalPoint> random_points_in_region_h(std::size_t count, std::mt19937_64& rng);

}  // namespace w3lab
