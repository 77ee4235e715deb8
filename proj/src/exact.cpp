#include "w3lab/exact.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <ostream>
#include <sstream>
#include <vector>

namespace w3lab {

namespace {

using TermMap = ExactScalar::TermMap;

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

BigInt parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return BigInt(digits, 10);
}

BigInt pow10(unsigned long k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

void add_scaled(TermMap& into, const TermMap& from, const BigRational& factor) {
  for (const auto& [mono, coeff] : from) {
    auto [it, inserted] = into.try_emplace(mono, coeff * factor);
    if (!inserted) {
      it->second += coeff * factor;
      if (it->second == 0) into.erase(it);
    }
  }
}

TermMap multiply(const TermMap& a, const TermMap& b) {
  TermMap out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      auto [it, inserted] = out.try_emplace(ma * mb, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

// (22+5c)^k as a polynomial, cached.
const TermMap& pole_power(std::uint32_t k) {
  static std::mutex mutex;
  static std::vector<TermMap> cache{TermMap{{Monomial{}, BigRational(1)}}};
  std::lock_guard lock(mutex);
  while (cache.size() <= k) {
    const TermMap base{{Monomial{0, 0, 0}, BigRational(22)}, {Monomial{1, 0, 0}, BigRational(5)}};
    cache.push_back(multiply(cache.back(), base));
  }
  return cache[k];
}

// Divide by (5c+22) if every (h,w)-slice, viewed as a polynomial in c, vanishes
// at c = -22/5.
std::optional<TermMap> divide_by_pole_factor(const TermMap& p) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<std::uint32_t, BigRational>> slices;
  for (const auto& [m, coeff] : p) slices[{m.h, m.w}][m.c] = coeff;

  TermMap out;
  for (const auto& [hw, poly] : slices) {
    const std::uint32_t deg = poly.rbegin()->first;
    if (deg == 0) return std::nullopt;
    std::vector<BigRational> coeffs(deg + 1);
    for (const auto& [e, v] : poly) coeffs[e] = v;
    std::vector<BigRational> quot(deg);
    quot[deg - 1] = coeffs[deg] / 5;
    for (std::uint32_t i = deg - 1; i >= 1; --i) quot[i - 1] = (coeffs[i] - 22 * quot[i]) / 5;
    if (coeffs[0] - 22 * quot[0] != 0) return std::nullopt;
    for (std::uint32_t i = 0; i < deg; ++i) {
      if (quot[i] != 0) out.emplace(Monomial{i, hw.first, hw.second}, quot[i]);
    }
  }
  return out;
}

bool divides(const Monomial& d, const Monomial& m) {
  return d.c <= m.c && d.h <= m.h && d.w <= m.w;
}

Monomial monomial_quotient(const Monomial& m, const Monomial& d) {
  return Monomial{m.c - d.c, m.h - d.h, m.w - d.w};
}

// Exact multivariate division in Q[c,h,w]; nullopt if a remainder survives.
std::optional<TermMap> polynomial_divide(TermMap remainder, const TermMap& divisor) {
  const auto& [lead_mono, lead_coeff] = *divisor.rbegin();
  TermMap quotient;
  while (!remainder.empty()) {
    const auto [rmono, rcoeff] = *remainder.rbegin();
    if (!divides(lead_mono, rmono)) return std::nullopt;
    const Monomial qm = monomial_quotient(rmono, lead_mono);
    const BigRational qc = rcoeff / lead_coeff;
    quotient.emplace(qm, qc);
    for (const auto& [dm, dc] : divisor) {
      auto [it, inserted] = remainder.try_emplace(qm * dm, -qc * dc);
      if (!inserted) {
        it->second -= qc * dc;
        if (it->second == 0) remainder.erase(it);
      }
    }
  }
  return quotient;
}

// Strip all (22+5c) factors from a nonzero polynomial.
std::uint32_t strip_pole_factors(TermMap& p) {
  std::uint32_t count = 0;
  while (auto q = divide_by_pole_factor(p)) {
    p = std::move(*q);
    ++count;
  }
  return count;
}

template <typename T>
std::vector<T> powers_of(const T& x, std::uint32_t max_exp) {
  std::vector<T> out(max_exp + 1);
  out[0] = T(1);
  for (std::uint32_t i = 1; i <= max_exp; ++i) out[i] = out[i - 1] * x;
  return out;
}

// Recursive-descent parser for the text form.
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : text_(text) {}

  ExactScalar parse_all() {
    ExactScalar value = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse scalar '" + std::string(text_) + "' at offset " +
                     std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char ch) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == ch;
  }

  bool starts_factor() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    const char ch = text_[pos_];
    return ch == '(' || ch == 'c' || ch == 'h' || ch == 'w' ||
           std::isdigit(static_cast<unsigned char>(ch));
  }

  ExactScalar parse_sum() {
    ExactScalar acc = parse_product();
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += parse_product();
      } else if (peek('-')) {
        ++pos_;
        acc -= parse_product();
      } else {
        return acc;
      }
    }
  }

  ExactScalar parse_product() {
    ExactScalar acc = parse_unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc *= parse_unary();
      } else if (peek('/')) {
        ++pos_;
        const ExactScalar divisor = parse_unary();
        auto inv = divisor.unit_inverse();
        if (!inv) fail("division only by constants and powers of (22+5c)");
        acc *= *inv;
      } else if (starts_factor()) {
        acc *= parse_power();  // implicit product, e.g. "5c"
      } else {
        return acc;
      }
    }
  }

  ExactScalar parse_unary() {
    if (peek('-')) {
      ++pos_;
      return -parse_unary();
    }
    if (peek('+')) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  ExactScalar parse_power() {
    ExactScalar base = parse_atom();
    if (peek('^')) {
      ++pos_;
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      ExactScalar result(1);
      for (unsigned long i = 0; i < e; ++i) result *= base;
      return result;
    }
    return base;
  }

  ExactScalar parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      ExactScalar inner = parse_sum();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (ch == 'c' || ch == 'h' || ch == 'w') {
      ++pos_;
      return ch == 'c' ? ExactScalar::c() : ch == 'h' ? ExactScalar::h() : ExactScalar::w();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      return ExactScalar(parse_rational(text_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BigRational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw ParseError("empty rational");

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const BigInt num = parse_integer(std::string_view(s).substr(0, slash));
    const BigInt den = parse_integer(std::string_view(s).substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    BigRational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view mantissa = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    const std::string_view exp_part = std::string_view(s).substr(e + 1);
    if (!is_integer_literal(exp_part)) throw ParseError("bad exponent in '" + s + "'");
    exponent = std::stol(std::string(exp_part));
    mantissa = std::string_view(s).substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  std::size_t i = 0;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    if (mantissa[0] == '-') digits.push_back('-');
    i = 1;
  }
  bool any_digit = false;
  for (; i < mantissa.size(); ++i) {
    const char ch = mantissa[i];
    if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else {
      throw ParseError("not a rational number: '" + s + "'");
    }
  }
  if (!any_digit) throw ParseError("not a rational number: '" + s + "'");
  BigRational q{BigInt(digits, 10)};
  const long shift = exponent - frac_digits;
  if (shift > 0) q *= pow10(static_cast<unsigned long>(shift));
  if (shift < 0) q /= pow10(static_cast<unsigned long>(-shift));
  q.canonicalize();
  return q;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

BigRational rational(long num, long den) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  return Monomial{a.c + b.c, a.h + b.h, a.w + b.w};
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  if (a.c != b.c) return a.c < b.c;
  if (a.h != b.h) return a.h < b.h;
  return a.w < b.w;
}

ExactScalar::ExactScalar(const BigRational& value) {
  if (value != 0) {
    BigRational q = value;
    q.canonicalize();
    terms_.emplace(Monomial{}, std::move(q));
  }
}

ExactScalar ExactScalar::c() { return from_terms({{Monomial{1, 0, 0}, BigRational(1)}}, 0); }
ExactScalar ExactScalar::h() { return from_terms({{Monomial{0, 1, 0}, BigRational(1)}}, 0); }
ExactScalar ExactScalar::w() { return from_terms({{Monomial{0, 0, 1}, BigRational(1)}}, 0); }

ExactScalar ExactScalar::pole_factor() { return from_terms(pole_power(1), 0); }

ExactScalar ExactScalar::inverse_pole_factor() {
  return from_terms({{Monomial{}, BigRational(1)}}, 1);
}

ExactScalar ExactScalar::b_squared() { return from_terms({{Monomial{}, BigRational(16)}}, 1); }

ExactScalar ExactScalar::from_terms(TermMap numerator, std::uint32_t denom_power) {
  ExactScalar s;
  s.terms_ = std::move(numerator);
  s.denom_power_ = denom_power;
  s.canonicalize();
  return s;
}

void ExactScalar::canonicalize() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
  if (terms_.empty()) {
    denom_power_ = 0;
    return;
  }
  while (denom_power_ > 0) {
    auto reduced = divide_by_pole_factor(terms_);
    if (!reduced) break;
    terms_ = std::move(*reduced);
    --denom_power_;
  }
}

ExactScalar ExactScalar::canonicalized() const {
  ExactScalar copy = *this;
  copy.canonicalize();
  return copy;
}

bool ExactScalar::is_constant() const {
  return denom_power_ == 0 &&
         (terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{}));
}

BigRational ExactScalar::constant_value() const {
  if (!is_constant()) throw std::logic_error("scalar is not a constant: " + to_string());
  return terms_.empty() ? BigRational(0) : terms_.begin()->second;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out = *this;
  for (auto& [m, coeff] : out.terms_) coeff = -coeff;
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (denom_power_ == other.denom_power_) {
    add_scaled(terms_, other.terms_, BigRational(1));
  } else if (denom_power_ > other.denom_power_) {
    add_scaled(terms_, multiply(other.terms_, pole_power(denom_power_ - other.denom_power_)),
               BigRational(1));
  } else {
    terms_ = multiply(terms_, pole_power(other.denom_power_ - denom_power_));
    add_scaled(terms_, other.terms_, BigRational(1));
    denom_power_ = other.denom_power_;
  }
  canonicalize();
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& other) { return *this += -other; }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return ExactScalar::from_terms(multiply(a.terms_, b.terms_), a.denom_power_ + b.denom_power_);
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& other) { return *this = *this * other; }

ExactScalar& ExactScalar::operator*=(const BigRational& factor) {
  if (factor == 0) return *this = ExactScalar();
  for (auto& [m, coeff] : terms_) coeff *= factor;
  return *this;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  return a.denom_power_ == b.denom_power_ && a.terms_ == b.terms_;
}

ExactScalar ExactScalar::divide_exact(const ExactScalar& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by zero scalar");
  if (is_zero()) return {};
  TermMap stripped = divisor.terms_;
  const std::uint32_t extra = strip_pole_factors(stripped);
  auto quotient = polynomial_divide(terms_, stripped);
  if (!quotient) {
    throw std::domain_error("inexact division: " + to_string() + " / " + divisor.to_string());
  }
  return from_terms(multiply(*quotient, pole_power(divisor.denom_power_)), denom_power_ + extra);
}

std::optional<ExactScalar> ExactScalar::unit_inverse() const {
  if (is_zero()) return std::nullopt;
  TermMap stripped = terms_;
  const std::uint32_t extra = strip_pole_factors(stripped);
  if (stripped.size() != 1 || stripped.begin()->first != Monomial{}) return std::nullopt;
  const BigRational inv = 1 / stripped.begin()->second;
  TermMap num = pole_power(denom_power_);
  for (auto& [m, coeff] : num) coeff *= inv;
  return from_terms(std::move(num), extra);
}

BigRational ExactScalar::evaluate(const BigRational& c, const BigRational& h,
                                  const BigRational& w) const {
  const BigRational pole = 22 + 5 * c;
  if (denom_power_ > 0 && pole == 0) throw PoleAtForbiddenCentralCharge();
  std::uint32_t mc = 0, mh = 0, mw = 0;
  for (const auto& [m, coeff] : terms_) {
    mc = std::max(mc, m.c);
    mh = std::max(mh, m.h);
    mw = std::max(mw, m.w);
  }
  const auto pc = powers_of(c, mc), ph = powers_of(h, mh), pw = powers_of(w, mw);
  BigRational sum = 0;
  for (const auto& [m, coeff] : terms_) sum += coeff * pc[m.c] * ph[m.h] * pw[m.w];
  for (std::uint32_t i = 0; i < denom_power_; ++i) sum /= pole;
  return sum;
}

double ExactScalar::evaluate(double c, double h, double w) const {
  const double pole = 22.0 + 5.0 * c;
  if (denom_power_ > 0 && pole == 0.0) throw PoleAtForbiddenCentralCharge();
  std::uint32_t mc = 0, mh = 0, mw = 0;
  for (const auto& [m, coeff] : terms_) {
    mc = std::max(mc, m.c);
    mh = std::max(mh, m.h);
    mw = std::max(mw, m.w);
  }
  const auto pc = powers_of(c, mc), ph = powers_of(h, mh), pw = powers_of(w, mw);
  double sum = 0.0;
  for (const auto& [m, coeff] : terms_) sum += coeff.get_d() * pc[m.c] * ph[m.h] * pw[m.w];
  for (std::uint32_t i = 0; i < denom_power_; ++i) sum /= pole;
  return sum;
}

std::string ExactScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, coeff] = *it;
    const bool negative = coeff < 0;
    const BigRational mag = abs(coeff);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    const auto push = [&](char var, std::uint32_t e) {
      if (e == 1) factors.emplace_back(1, var);
      if (e > 1) factors.push_back(std::string(1, var) + "^" + std::to_string(e));
    };
    push('c', m.c);
    push('h', m.h);
    push('w', m.w);
    if (factors.empty()) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  if (denom_power_ == 0) return os.str();
  return "(" + os.str() + ")/(22+5c)^" + std::to_string(denom_power_);
}

ExactScalar ExactScalar::parse(std::string_view text) { return ScalarParser(text).parse_all(); }

std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.to_string(); }

}  // namespace w3lab
