#pragma once

// Two-current Fock space and the free-field realization of W3.
//
// Basis vectors a_{[1],-m_1}...a_{[2],-n_1}... Omega_{q1,q2} are labelled by a
// pair of partitions. All fields use the shifted convention F(z) = sum F_n z^{-n}
// and every mode is computed exactly on a finite level; an operation whose result
// would leave the truncated space raises CutoffExceeded.

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "w3lab/verma.hpp"

namespace w3lab {

using Complex = std::complex<double>;

struct BiPartition {
  std::vector<int> part1;  // weakly decreasing
  std::vector<int> part2;

  int level() const;
  std::string to_string() const;
  auto operator<=>(const BiPartition&) const = default;
};

using FockState = std::map<BiPartition, Complex>;

class CutoffExceeded : public std::runtime_error {
 public:
  CutoffExceeded(int level, int cutoff)
      : std::runtime_error("state of level " + std::to_string(level) + " exceeds the Fock cutoff " +
                           std::to_string(cutoff)) {}
};

inline constexpr double kPruneThreshold = 1e-14;

FockState vacuum();
FockState basis_state(const BiPartition& b);
int max_level(const FockState& v);
/// into += factor * from, pruning small coefficients.
void add_to(FockState& into, const FockState& from, Complex factor = 1.0);
FockState scaled(const FockState& v, Complex factor);
double max_abs(const FockState& v);

/// <b, b> = prod_k k^{m_k} m_k! over both partitions.
double fock_norm(const BiPartition& b);
/// Hermitian, antilinear in the first argument.
Complex fock_inner(const FockState& u, const FockState& v);
/// All basis keys of exactly the given level.
std::vector<BiPartition> fock_basis(int level);

/// Lowest weights and cutoff of the truncated module.
struct FockModule {
  double q1 = 0.0;
  double q2 = 0.0;
  int cutoff = 8;

  double zero_mode(int which) const { return which == 1 ? q1 : q2; }
};

/// a_{[which],n} v.
FockState current_mode(const FockModule& module, int which, int n, const FockState& v);
/// Mode n of :J^power:, fully normal ordered (negative modes to the left).
FockState normal_power_mode(const FockModule& module, int which, int power, int n, const FockState& v);
/// Mode n of :J :J^2:: from the recursive normal product J_+ G + G J_-.
FockState normal_power3_recursive(const FockModule& module, int which, int n, const FockState& v);

/// Scalar series s(z) = sum_{n<=0} s_n z^{-n}.
class Series {
 public:
  Series();
  explicit Series(std::function<Complex(int)> coefficient);
  static Series constant(Complex value);
  /// rho(z) = -i (z-1)/(z+1) expanded at z = 0.
  static Series rho();

  Complex operator[](int n) const;
  /// Circle derivative: s'_n = -i n s_n.
  Series derivative() const;

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(Complex k, const Series& a);
  /// Cauchy product.
  friend Series operator*(const Series& a, const Series& b);

 private:
  std::shared_ptr<const std::function<Complex(int)>> coefficient_;
};

/// rho_0, rho_{-1}, ..., rho_{-maxOrder}.
std::vector<Complex> rho_coefficients(int max_order);

/// A field assembled from the two currents: normal powers, circle derivatives,
/// products of commuting factors and multiplication by scalar series.
class Field {
 public:
  struct Node;

  Field();
  static Field current(int which);
  static Field normal_power(int which, int power);
  static Field scalar(const Series& s);
  static Field constant(Complex value) { return scalar(Series::constant(value)); }

  Field derivative() const;
  /// F G for fields acting on different currents (or where one side is scalar).
  static Field product(const Field& f, const Field& g);

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);
  friend Field operator*(Complex k, const Field& a);
  friend Field operator*(const Series& s, const Field& a);

  FockState mode(int n, const FockState& v, const FockModule& module) const;
  /// Bit j-1 set when the field involves current j.
  unsigned currents() const;

 private:
  explicit Field(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// :(J + f)^2: = :J^2: + 2 f J + f^2 for a scalar shift f.
Field shifted_normal_square(int which, const Series& shift);

class ModeOperator {
 public:
  ModeOperator(int index, std::function<FockState(const FockState&)> action)
      : index_(index), action_(std::move(action)) {}
  int index() const { return index_; }
  FockState operator()(const FockState& v) const { return action_(v); }

 private:
  int index_;
  std::function<FockState(const FockState&)> action_;
};

ModeOperator current_operator(const FockModule& module, int which, int n);
ModeOperator normal_power_operator(const FockModule& module, int which, int power, int n);

enum class Variant { Raw, VacuumModified, UnitaryFamily };
enum class FieldKind { T, M };

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

struct RealizationParams {
  double kappa = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  Complex eta{0.0, 0.0};
  int cutoff = 8;
  int b_sign = 1;

  double c() const { return 2.0 + 12.0 * kappa * kappa; }
  /// b = bSign * 4 / sqrt(22 + 5c)
  double b() const;
  FockModule module() const { return {q1, q2, cutoff}; }
};

nlohmann::json to_json(const RealizationParams& p);

struct W3Fields {
  Field T;
  Field M;
};

W3Fields fz_fields(Variant variant, const RealizationParams& params);
/// The raw realization built from J_1 + shift in place of J_1.
W3Fields fz_fields_shifted(const Series& shift, const RealizationParams& params);

ModeOperator fz_field_mode(FieldKind field, Variant variant, int n, const RealizationParams& params);

/// Lowest weight (h, w) of Omega_{q1,q2} in closed form.
std::pair<Complex, Complex> lowest_weight(Variant variant, const RealizationParams& params);

/// L_n = T_n and W_n = M_n with a memo of actions on basis vectors.
class Realization {
 public:
  Realization(Variant variant, const RealizationParams& params);
  Realization(W3Fields fields, const RealizationParams& params);

  FockState apply(const Mode& mode, const FockState& v);
  FockState L(int n, const FockState& v) { return apply(w3lab::L(n), v); }
  FockState W(int n, const FockState& v) { return apply(w3lab::W(n), v); }
  /// Lambda_p from the realized L modes.
  FockState lambda(int p, const FockState& v);
  /// The word applied to Omega_{q1,q2}, rightmost mode first.
  FockState word_state(const ModeWord& word);

  const RealizationParams& params() const { return params_; }
  const FockModule& module() const { return module_; }

 private:
  W3Fields fields_;
  RealizationParams params_;
  FockModule module_;
  std::mutex mutex_;
  std::map<std::tuple<int, int, BiPartition>, FockState> cache_;
};

}  // namespace w3lab
