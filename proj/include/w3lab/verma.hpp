#pragma once

// Abstract lowest-weight calculus of the W3 algebra.
//
// Vectors of the Verma module are combinations of ordered words
//   L_{-m_1} ... L_{-m_l} W_{-n_1} ... W_{-n_k} |h,w>,   m_i, n_j weakly increasing,
// with ExactScalar coefficients. Modes act by commuting through the word with
// the W3 mode relations until every term is ordered again; L_0 and W_0 hit the
// lowest-weight vector as the symbols h and w.

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "w3lab/exact.hpp"

namespace w3lab {

enum class Generator : std::uint8_t { L = 0, W = 1 };

struct Mode {
  Generator generator = Generator::L;
  int index = 0;

  /// d(L) = 2, d(W) = 3
  int grade() const { return generator == Generator::L ? 2 : 3; }
  auto operator<=>(const Mode&) const = default;
};

inline Mode L(int n) { return Mode{Generator::L, n}; }
inline Mode W(int n) { return Mode{Generator::W, n}; }

std::string to_string(const Mode& m);

/// Coefficient of L_{m+n} in [W_m, W_n]: (m-n)(2m^2 - mn + 2n^2 - 8)/30.
BigRational ww_virasoro_coefficient(int m, int n);

/// L_{-m_1}...L_{-m_l} W_{-n_1}...W_{-n_k} applied to the lowest-weight vector.
struct ModeWord {
  std::vector<int> l_part;  // m_1 <= ... <= m_l, all >= 1
  std::vector<int> w_part;  // n_1 <= ... <= n_k, all >= 1

  int level() const;
  int grade() const { return 2 * static_cast<int>(l_part.size()) + 3 * static_cast<int>(w_part.size()); }
  bool empty() const { return l_part.empty() && w_part.empty(); }
  bool is_valid() const;
  /// The creation modes from left to right.
  std::vector<Mode> modes() const;

  /// "L-1 L-2 W-3"; the empty word is "Omega".
  std::string to_string() const;
  static ModeWord parse(const std::string& text);

  auto operator<=>(const ModeWord&) const = default;
};

struct ModeWordHash {
  std::size_t operator()(const ModeWord& w) const;
};

using VermaVector = std::map<ModeWord, ExactScalar>;

void add_to(VermaVector& into, const VermaVector& from, const ExactScalar& factor);
void add_to(VermaVector& into, const ModeWord& word, const ExactScalar& factor);
ExactScalar omega_coefficient(const VermaVector& v);

/// All ordered words of the given level. Order: more L's first, then the L
/// part lexicographically, then the W part lexicographically.
std::vector<ModeWord> enumerate_basis(int level);

class LevelTooLarge : public std::out_of_range {
 public:
  LevelTooLarge(int level, int cap)
      : std::out_of_range("level " + std::to_string(level) + " exceeds the configured cap " +
                          std::to_string(cap)) {}
};

struct GramMatrix {
  int level = 0;
  std::vector<ModeWord> basis;
  std::vector<std::vector<ExactScalar>> entries;

  std::size_t size() const { return basis.size(); }
  std::vector<std::vector<BigRational>> evaluate(const BigRational& c, const BigRational& h,
                                                 const BigRational& w) const;
  std::vector<std::vector<double>> evaluate(double c, double h, double w) const;
};

nlohmann::json to_json(const GramMatrix& m);
GramMatrix gram_from_json(const nlohmann::json& j);

struct RationalPoint {
  BigRational c, h, w;
};

/// Determinant of a Gram matrix. `evaluated` marks a value computed at `point`
/// instead of symbolically.
struct Determinant {
  ExactScalar value;
  bool evaluated = false;
  std::optional<RationalPoint> point;
};

/// Fraction-free (Bareiss) elimination over the ExactScalar ring.
ExactScalar bareiss_determinant(std::vector<std::vector<ExactScalar>> m);
/// Bareiss elimination over Q.
BigRational bareiss_determinant(std::vector<std::vector<BigRational>> m);

Determinant determinant(const GramMatrix& m);
Determinant determinant(const GramMatrix& m, const RationalPoint& at);

struct EngineOptions {
  int level_cap = 6;
  unsigned threads = 1;
};

/// Reduction engine with a shared memo cache of (mode, word) actions.
class VermaEngine {
 public:
  explicit VermaEngine(EngineOptions options = {});

  VermaVector apply(const Mode& mode, const ModeWord& word);
  VermaVector apply(const Mode& mode, const VermaVector& v);
  /// Lambda_p = sum_{k>-2} L_{p-k} L_k + sum_{k<=-2} L_k L_{p-k} - 3/10 (p+2)(p+3) L_p.
  VermaVector apply_lambda(int p, const VermaVector& v);
  /// [A, B] as given by the W3 mode relations, applied to v.
  VermaVector apply_commutator(const Mode& a, const Mode& b, const VermaVector& v);

  /// Canonical invariant form <u|v>, normalized by <Omega|Omega> = 1.
  ExactScalar inner_product(const ModeWord& u, const ModeWord& v);
  GramMatrix gram_matrix(int level);

  std::size_t cache_size() const;
  const EngineOptions& options() const { return options_; }

 private:
  struct Key {
    Mode mode;
    ModeWord word;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  VermaVector compute(const Mode& mode, const ModeWord& word);

  EngineOptions options_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, VermaVector, KeyHash> cache_;
};

}  // namespace w3lab
