#include "w3lab/kac.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace w3lab {

namespace {

// Polynomial in A = alpha_+^2 and B = alpha_-^2.
template <typename T>
using BiPoly = std::map<std::pair<int, int>, T>;

template <typename T>
BiPoly<T> multiply(const BiPoly<T>& x, const BiPoly<T>& y) {
  BiPoly<T> out;
  for (const auto& [ex, cx] : x) {
    for (const auto& [ey, cy] : y) {
      auto& slot = out[{ex.first + ey.first, ex.second + ey.second}];
      slot = slot + cx * cy;
    }
  }
  return out;
}

template <typename T>
BiPoly<T> swapped(const BiPoly<T>& x) {
  BiPoly<T> out;
  for (const auto& [e, coeff] : x) out[{e.second, e.first}] = coeff;
  return out;
}

// f_mn(A, B) - w^2 with f_mn = K [h + (4-n^2)A + (4-m^2)B - 2 + mn/2]
//                                  [h - 4((n^2-1)A + (m^2-1)B) - 2(1-mn)]^2.
template <typename T>
BiPoly<T> kac_factor_poly(int m, int n, const T& c, const T& h, const T& w) {
  const T two(2);
  const T mn(m * n);
  const BiPoly<T> linear{{{0, 0}, h - two + mn / two},
                         {{1, 0}, T(4 - n * n)},
                         {{0, 1}, T(4 - m * m)}};
  const BiPoly<T> quadratic_root{{{0, 0}, h - two * (T(1) - mn)},
                                 {{1, 0}, T(-4 * (n * n - 1))},
                                 {{0, 1}, T(-4 * (m * m - 1))}};
  BiPoly<T> f = multiply(linear, multiply(quadratic_root, quadratic_root));
  const T k = T(64) / (T(9) * (T(5) * c + T(22)));
  for (auto& [e, coeff] : f) coeff = coeff * k;
  auto& constant = f[{0, 0}];
  constant = constant - w * w;
  return f;
}

// Value of a symmetric polynomial given s = A + B and p = AB.
template <typename T>
T evaluate_symmetric(const BiPoly<T>& poly, const T& s, const T& p) {
  int top = 0;
  for (const auto& [e, coeff] : poly) top = std::max({top, e.first, e.second});
  // power sums A^k + B^k
  std::vector<T> power_sum(static_cast<std::size_t>(top) + 1);
  power_sum[0] = T(2);
  if (top >= 1) power_sum[1] = s;
  for (int k = 2; k <= top; ++k) power_sum[k] = s * power_sum[k - 1] - p * power_sum[k - 2];
  std::vector<T> p_pow(static_cast<std::size_t>(top) + 1);
  p_pow[0] = T(1);
  for (int k = 1; k <= top; ++k) p_pow[k] = p_pow[k - 1] * p;

  T total(0);
  for (const auto& [e, coeff] : poly) {
    const auto [i, j] = e;
    if (i == j) {
      total = total + coeff * p_pow[i];
    } else if (i > j) {
      // A^i B^j + A^j B^i = p^j (A^(i-j) + B^(i-j)); the (j,i) term carries the same coefficient.
      total = total + coeff * p_pow[j] * power_sum[i - j];
    }
  }
  return total;
}

template <typename T>
T paired_factor(int m, int n, const T& c, const T& h, const T& w, const T& s, const T& p) {
  const BiPoly<T> g = kac_factor_poly(m, n, c, h, w);
  if (m == n) {
    const T v = evaluate_symmetric(g, s, p);
    return v * v;
  }
  return evaluate_symmetric(multiply(g, swapped(g)), s, p);
}

template <typename T>
T diagonal_factor(int m, const T& c, const T& h, const T& w, const T& s, const T& p) {
  return evaluate_symmetric(kac_factor_poly(m, m, c, h, w), s, p);
}

void check_pole(const BigRational& c) {
  if (5 * c + 22 == 0) throw PoleAtForbiddenCentralCharge();
}

void check_pole(double c) {
  if (std::abs(5.0 * c + 22.0) < 1e-12) throw PoleAtForbiddenCentralCharge();
}

template <typename T>
T power(T base, std::uint64_t e) {
  T out(1);
  while (e > 0) {
    if (e & 1U) out = out * base;
    base = base * base;
    e >>= 1U;
  }
  return out;
}

void partitions_with_max(int n, int max_part, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions_with_max(n - part, part, current, out);
    current.pop_back();
  }
}

template <typename T>
T closed_form(int level, const T& c, const T& h, const T& w, const T& s, const T& p) {
  T total(1);
  for (const KacFactor& f : kac_factors(level).factors) {
    if (f.m > f.n) continue;
    const T value =
        f.m == f.n ? diagonal_factor(f.m, c, h, w, s, p) : paired_factor(f.m, f.n, c, h, w, s, p);
    total = total * power(value, f.exponent);
  }
  return total;
}

BigRational abs_q(const BigRational& q) { return q < 0 ? BigRational(-q) : q; }

}  // namespace

std::uint64_t p2(int n) {
  if (n < 0) return 0;
  std::vector<std::uint64_t> coeff(static_cast<std::size_t>(n) + 1, 0);
  coeff[0] = 1;
  // multiply by 1/(1-t^k)^2 as two passes of 1/(1-t^k)
  for (int k = 1; k <= n; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = k; i <= n; ++i) coeff[i] += coeff[i - k];
    }
  }
  return coeff[n];
}

std::uint64_t p2_brute_force(int n) {
  if (n < 0) return 0;
  std::uint64_t count = 0;
  for (int first = 0; first <= n; ++first) {
    std::vector<std::vector<int>> a;
    std::vector<std::vector<int>> b;
    std::vector<int> scratch;
    partitions_with_max(first, first, scratch, a);
    partitions_with_max(n - first, n - first, scratch, b);
    count += a.size() * b.size();
  }
  return count;
}

KacFactors kac_factors(int level) {
  KacFactors out;
  out.level = level;
  for (int k = 1; k <= level; ++k) {
    for (int m = 1; m <= k; ++m) {
      if (k % m == 0) out.factors.push_back({m, k / m, p2(level - k)});
    }
  }
  return out;
}

AlphaInvariants alpha_invariants(const BigRational& c) {
  check_pole(c);
  return {BigRational((50 - c) / 96), rational(1, 16)};
}

std::pair<std::complex<double>, std::complex<double>> alpha_squared(double c) {
  const std::complex<double> root = std::sqrt(std::complex<double>((2.0 - c) * (98.0 - c), 0.0));
  return {(50.0 - c + root) / 192.0, (50.0 - c - root) / 192.0};
}

std::complex<double> f_mn_complex(int m, int n, double h, double c) {
  check_pole(c);
  const auto [a, b] = alpha_squared(c);
  const double mm = m * m;
  const double nn = n * n;
  const std::complex<double> linear = h + (4.0 - nn) * a + (4.0 - mm) * b - 2.0 + m * n / 2.0;
  const std::complex<double> root = h - 4.0 * ((nn - 1.0) * a + (mm - 1.0) * b) - 2.0 * (1.0 - m * n);
  return 64.0 / (9.0 * (5.0 * c + 22.0)) * linear * root * root;
}

double f_mn(int m, int n, double h, double c) {
  check_pole(c);
  if (m == n) {
    return diagonal_factor(m, c, h, 0.0, (50.0 - c) / 96.0, 1.0 / 16.0);
  }
  if (c > 2.0 && c < 98.0) {
    throw std::domain_error("f_mn with m != n is not real for 2 < c < 98");
  }
  return f_mn_complex(m, n, h, c).real();
}

BigRational f_mm_minus_w2(int m, const BigRational& c, const BigRational& h, const BigRational& w) {
  const AlphaInvariants inv = alpha_invariants(c);
  return diagonal_factor(m, c, h, w, inv.sum_alpha, inv.prod_alpha);
}

BigRational paired_kac_factor(int m, int n, const BigRational& c, const BigRational& h,
                              const BigRational& w) {
  const AlphaInvariants inv = alpha_invariants(c);
  return paired_factor(m, n, c, h, w, inv.sum_alpha, inv.prod_alpha);
}

double paired_kac_factor(int m, int n, double c, double h, double w) {
  check_pole(c);
  return paired_factor(m, n, c, h, w, (50.0 - c) / 96.0, 1.0 / 16.0);
}

std::complex<double> paired_kac_factor_complex(int m, int n, double c, double h, double w) {
  return (f_mn_complex(m, n, h, c) - w * w) * (f_mn_complex(n, m, h, c) - w * w);
}

BigRational kac_closed_form(int level, const BigRational& c, const BigRational& h,
                            const BigRational& w) {
  const AlphaInvariants inv = alpha_invariants(c);
  return closed_form(level, c, h, w, inv.sum_alpha, inv.prod_alpha);
}

double kac_closed_form(int level, double c, double h, double w) {
  check_pole(c);
  return closed_form(level, c, h, w, (50.0 - c) / 96.0, 1.0 / 16.0);
}

std::string ComparisonReport::verdict() const {
  if (!agrees) return "deviation";
  return constant_positive ? "constant-positive" : "constant-nonpositive";
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    points.push_back({{"c", to_string(p.c)}, {"h", to_string(p.h)}, {"w", to_string(p.w)}});
  }
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& q : r.ratios) ratios.push_back(to_string(q));
  return {{"level", r.level},
          {"points", std::move(points)},
          {"ratios", std::move(ratios)},
          {"constant", to_string(r.constant)},
          {"maxRelDeviation", r.max_rel_deviation},
          {"tolerance", r.tolerance},
          {"verdict", r.verdict()}};
}

ComparisonReport compare_with_gram(const GramMatrix& gram, const std::vector<RationalPoint>& points,
                                   double tolerance) {
  if (points.size() < 2) throw std::invalid_argument("compare_with_gram needs at least 2 sample points");
  ComparisonReport report;
  report.level = gram.level;
  report.points = points;
  report.tolerance = tolerance;
  for (const auto& p : points) {
    check_pole(p.c);
    const BigRational closed = kac_closed_form(gram.level, p.c, p.h, p.w);
    if (closed == 0) {
      throw DegenerateSample("closed-form Kac determinant vanishes at c=" + to_string(p.c) +
                             " h=" + to_string(p.h) + " w=" + to_string(p.w));
    }
    report.ratios.push_back(bareiss_determinant(gram.evaluate(p.c, p.h, p.w)) / closed);
  }
  report.constant = report.ratios.front();
  report.constant_positive = true;
  for (const auto& r : report.ratios) {
    if (r <= 0) report.constant_positive = false;
    const BigRational dev = report.constant == 0 ? abs_q(r) : BigRational(abs_q(r - report.constant) / abs_q(report.constant));
    report.max_rel_deviation = std::max(report.max_rel_deviation, dev.get_d());
  }
  report.agrees = report.max_rel_deviation <= tolerance;
  return report;
}

ComparisonReport compare_with_gram(VermaEngine& engine, int level,
                                   const std::vector<RationalPoint>& points, double tolerance) {
  return compare_with_gram(engine.gram_matrix(level), points, tolerance);
}

std::vector<RationalPoint> random_points_in_region_h(std::size_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c_num(2001, 97999);
  std::uniform_int_distribution<long> h_offset(1, 200);
  std::uniform_int_distribution<long> w_frac(-90, 90);
  std::vector<RationalPoint> out;
  while (out.size() < count) {
    const BigRational c = rational(c_num(rng), 1000);
    const BigRational h = BigRational((c - 2) / 32) + rational(h_offset(rng), 100);
    const BigRational f = f_mm_minus_w2(1, c, h, 0);
    const BigRational root = rational(static_cast<long>(std::floor(std::sqrt(f.get_d()) * 1000)), 1000);
    const BigRational w = rational(w_frac(rng), 100) * root;
    if (f_mm_minus_w2(1, c, h, w) > 0) out.push_back({c, h, w});
  }
  return out;
}

}  // namespace w3lab
