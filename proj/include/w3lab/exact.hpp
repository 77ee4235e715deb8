#pragma once

// Exact scalars for the W3 lowest-weight calculus.
//
// ExactScalar is an element of Q[c, h, w][1/(22+5c)]: a polynomial numerator
// with arbitrary-precision rational coefficients over a nonnegative power of
// D = 22 + 5c. The representation is canonical (no zero coefficients, D does
// not divide the numerator unless the power is zero), so equality is
// structural.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace w3lab {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Parse "p/q", "p" or a terminating decimal ("0.125", "-3e-2") exactly.
BigRational parse_rational(std::string_view text);
std::string to_string(const BigRational& q);
/// num/den in lowest terms.
BigRational rational(long num, long den);

/// Thrown when a value with a (22+5c) denominator is evaluated at c = -22/5.
class PoleAtForbiddenCentralCharge : public std::domain_error {
 public:
  PoleAtForbiddenCentralCharge()
      : std::domain_error("central charge c = -22/5 is a pole (22+5c = 0)") {}
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent triple of c^ec h^eh w^ew.
struct Monomial {
  std::uint32_t c = 0;
  std::uint32_t h = 0;
  std::uint32_t w = 0;

  std::uint32_t degree() const { return c + h + w; }
  bool operator==(const Monomial&) const = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Graded lexicographic order with c > h > w.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class ExactScalar {
 public:
  using TermMap = std::map<Monomial, BigRational, GrlexLess>;

  ExactScalar() = default;
  ExactScalar(const BigRational& value);  // NOLINT(implicit)
  ExactScalar(long value) : ExactScalar(BigRational(value)) {}  // NOLINT(implicit)
  ExactScalar(int value) : ExactScalar(BigRational(value)) {}   // NOLINT(implicit)

  static ExactScalar c();
  static ExactScalar h();
  static ExactScalar w();
  /// 22 + 5c
  static ExactScalar pole_factor();
  /// 1/(22+5c)
  static ExactScalar inverse_pole_factor();
  /// b^2 = 16/(22+5c)
  static ExactScalar b_squared();

  /// Build from a numerator and a power of (22+5c); canonicalizes.
  static ExactScalar from_terms(TermMap numerator, std::uint32_t denom_power);

  const TermMap& numerator() const { return terms_; }
  std::uint32_t denom_power() const { return denom_power_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant scalar; throws std::logic_error otherwise.
  BigRational constant_value() const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& other);
  ExactScalar& operator-=(const ExactScalar& other);
  ExactScalar& operator*=(const ExactScalar& other);
  ExactScalar& operator*=(const BigRational& factor);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator*(ExactScalar a, const BigRational& b) { return a *= b; }
  friend ExactScalar operator*(const BigRational& b, ExactScalar a) { return a *= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);

  /// Exact quotient a / divisor in Q[c,h,w][1/(22+5c)].
  /// Throws std::domain_error if the divisor does not divide exactly.
  ExactScalar divide_exact(const ExactScalar& divisor) const;

  /// Inverse when the scalar is a unit of the ring, i.e. q * (22+5c)^k.
  std::optional<ExactScalar> unit_inverse() const;

  BigRational evaluate(const BigRational& c, const BigRational& h,
                       const BigRational& w) const;
  double evaluate(double c, double h, double w) const;

  /// Canonical text form, e.g. "(-3*c*h^2 + 64*h^3)/(22+5c)^1".
  std::string to_string() const;
  static ExactScalar parse(std::string_view text);

  /// Re-run canonicalization (identity on every value produced by this class).
  ExactScalar canonicalized() const;

 private:
  void canonicalize();

  TermMap terms_;
  std::uint32_t denom_power_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& s);

}  // namespace w3lab
