#include "w3lab/verma.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <thread>

namespace w3lab {

namespace {

// Creation modes are ordered L before W, then by increasing |index|.
bool precedes_or_equal(const Mode& a, const Mode& b) {
  if (a.generator != b.generator) return a.generator < b.generator;
  return -a.index <= -b.index;
}

ModeWord drop_first(const ModeWord& word) {
  ModeWord rest = word;
  if (!rest.l_part.empty()) {
    rest.l_part.erase(rest.l_part.begin());
  } else {
    rest.w_part.erase(rest.w_part.begin());
  }
  return rest;
}

Mode first_mode(const ModeWord& word) {
  return word.l_part.empty() ? W(-word.w_part.front()) : L(-word.l_part.front());
}

ModeWord prepend(const Mode& mode, const ModeWord& word) {
  ModeWord out = word;
  auto& part = mode.generator == Generator::L ? out.l_part : out.w_part;
  part.insert(part.begin(), -mode.index);
  return out;
}

int max_level(const VermaVector& v) {
  int level = 0;
  for (const auto& [word, coeff] : v) level = std::max(level, word.level());
  return level;
}

void generate_partitions(int remaining, int min_part, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int part = min_part; part <= remaining; ++part) {
    current.push_back(part);
    generate_partitions(remaining - part, part, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  generate_partitions(n, 1, current, out);
  return out;
}

template <typename Scalar>
Scalar bareiss(std::vector<std::vector<Scalar>> m, const Scalar& one,
               const std::function<Scalar(const Scalar&, const Scalar&)>& exact_div,
               const std::function<bool(const Scalar&)>& is_zero) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  bool negate = false;
  Scalar previous = one;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(m[k][k])) {
      std::size_t pivot = k + 1;
      while (pivot < n && is_zero(m[pivot][k])) ++pivot;
      if (pivot == n) return Scalar{};
      std::swap(m[k], m[pivot]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], previous);
      }
    }
    previous = m[k][k];
  }
  Scalar det = m[n - 1][n - 1];
  return negate ? Scalar(-det) : det;
}

}  // namespace

BigRational ww_virasoro_coefficient(int m, int n) {
  return rational((m - n) * (2 * m * m - m * n + 2 * n * n - 8), 30);
}

std::string to_string(const Mode& m) {
  return std::string(m.generator == Generator::L ? "L" : "W") + std::to_string(m.index);
}

int ModeWord::level() const {
  int sum = 0;
  for (int m : l_part) sum += m;
  for (int n : w_part) sum += n;
  return sum;
}

bool ModeWord::is_valid() const {
  const auto ok = [](const std::vector<int>& part) {
    return std::all_of(part.begin(), part.end(), [](int x) { return x >= 1; }) &&
           std::is_sorted(part.begin(), part.end());
  };
  return ok(l_part) && ok(w_part);
}

std::vector<Mode> ModeWord::modes() const {
  std::vector<Mode> out;
  for (int m : l_part) out.push_back(L(-m));
  for (int n : w_part) out.push_back(W(-n));
  return out;
}

std::string ModeWord::to_string() const {
  if (empty()) return "Omega";
  std::ostringstream os;
  bool first = true;
  for (const Mode& m : modes()) {
    os << (first ? "" : " ") << w3lab::to_string(m);
    first = false;
  }
  return os.str();
}

ModeWord ModeWord::parse(const std::string& text) {
  ModeWord word;
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    if (token == "Omega") continue;
    if (token.size() < 3 || (token[0] != 'L' && token[0] != 'W') || token[1] != '-') {
      throw ParseError("bad mode token '" + token + "' in word '" + text + "'");
    }
    const int n = std::stoi(token.substr(2));
    if (token[0] == 'L') {
      if (!word.w_part.empty()) throw ParseError("L mode after W mode in '" + text + "'");
      word.l_part.push_back(n);
    } else {
      word.w_part.push_back(n);
    }
  }
  if (!word.is_valid()) throw ParseError("word is not in ordered form: '" + text + "'");
  return word;
}

std::size_t ModeWordHash::operator()(const ModeWord& w) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  const auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (int m : w.l_part) mix(static_cast<std::size_t>(m));
  mix(0xffff);
  for (int n : w.w_part) mix(static_cast<std::size_t>(n));
  return h;
}

void add_to(VermaVector& into, const ModeWord& word, const ExactScalar& factor) {
  if (factor.is_zero()) return;
  auto [it, inserted] = into.try_emplace(word, factor);
  if (!inserted) {
    it->second += factor;
    if (it->second.is_zero()) into.erase(it);
  }
}

void add_to(VermaVector& into, const VermaVector& from, const ExactScalar& factor) {
  if (factor.is_zero()) return;
  for (const auto& [word, coeff] : from) add_to(into, word, coeff * factor);
}

ExactScalar omega_coefficient(const VermaVector& v) {
  const auto it = v.find(ModeWord{});
  return it == v.end() ? ExactScalar() : it->second;
}

std::vector<ModeWord> enumerate_basis(int level) {
  std::vector<ModeWord> out;
  if (level < 0) return out;
  for (int l_level = 0; l_level <= level; ++l_level) {
    for (const auto& lp : partitions(l_level)) {
      for (const auto& wp : partitions(level - l_level)) out.push_back(ModeWord{lp, wp});
    }
  }
  std::sort(out.begin(), out.end(), [](const ModeWord& a, const ModeWord& b) {
    if (a.l_part.size() != b.l_part.size()) return a.l_part.size() > b.l_part.size();
    if (a.l_part != b.l_part) return a.l_part < b.l_part;
    return a.w_part < b.w_part;
  });
  return out;
}

std::vector<std::vector<BigRational>> GramMatrix::evaluate(const BigRational& c,
                                                           const BigRational& h,
                                                           const BigRational& w) const {
  std::vector<std::vector<BigRational>> out(size(), std::vector<BigRational>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = entries[i][j].evaluate(c, h, w);
  }
  return out;
}

std::vector<std::vector<double>> GramMatrix::evaluate(double c, double h, double w) const {
  std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = entries[i][j].evaluate(c, h, w);
  }
  return out;
}

nlohmann::json to_json(const GramMatrix& m) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& word : m.basis) basis.push_back(word.to_string());
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : m.entries) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(e.to_string());
    rows.push_back(std::move(r));
  }
  return {{"level", m.level}, {"basis", std::move(basis)}, {"entries", std::move(rows)}};
}

GramMatrix gram_from_json(const nlohmann::json& j) {
  GramMatrix m;
  m.level = j.at("level").get<int>();
  for (const auto& word : j.at("basis")) m.basis.push_back(ModeWord::parse(word.get<std::string>()));
  for (const auto& row : j.at("entries")) {
    std::vector<ExactScalar> r;
    for (const auto& e : row) r.push_back(ExactScalar::parse(e.get<std::string>()));
    if (r.size() != m.basis.size()) throw ParseError("gram row length does not match basis");
    m.entries.push_back(std::move(r));
  }
  if (m.entries.size() != m.basis.size()) throw ParseError("gram row count does not match basis");
  return m;
}

ExactScalar bareiss_determinant(std::vector<std::vector<ExactScalar>> m) {
  return bareiss<ExactScalar>(
      std::move(m), ExactScalar(1),
      [](const ExactScalar& a, const ExactScalar& b) { return a.divide_exact(b); },
      [](const ExactScalar& a) { return a.is_zero(); });
}

BigRational bareiss_determinant(std::vector<std::vector<BigRational>> m) {
  return bareiss<BigRational>(
      std::move(m), BigRational(1),
      [](const BigRational& a, const BigRational& b) { return BigRational(a / b); },
      [](const BigRational& a) { return a == 0; });
}

Determinant determinant(const GramMatrix& m) { return {bareiss_determinant(m.entries), false, {}}; }

Determinant determinant(const GramMatrix& m, const RationalPoint& at) {
  return {ExactScalar(bareiss_determinant(m.evaluate(at.c, at.h, at.w))), true, at};
}

VermaEngine::VermaEngine(EngineOptions options) : options_(options) {}

std::size_t VermaEngine::KeyHash::operator()(const Key& k) const {
  const std::size_t mode_hash =
      (static_cast<std::size_t>(k.mode.generator) << 32) ^ static_cast<std::size_t>(k.mode.index + 1024);
  return ModeWordHash{}(k.word) ^ (mode_hash * 0x100000001b3ULL);
}

std::size_t VermaEngine::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

VermaVector VermaEngine::apply(const Mode& mode, const ModeWord& word) {
  Key key{mode, word};
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  VermaVector result = compute(mode, word);
  std::unique_lock lock(mutex_);
  cache_.try_emplace(std::move(key), result);
  return result;
}

VermaVector VermaEngine::apply(const Mode& mode, const VermaVector& v) {
  VermaVector out;
  for (const auto& [word, coeff] : v) add_to(out, apply(mode, word), coeff);
  return out;
}

VermaVector VermaEngine::compute(const Mode& mode, const ModeWord& word) {
  if (word.empty()) {
    if (mode.index > 0) return {};
    if (mode.index == 0) {
      return {{ModeWord{}, mode.generator == Generator::L ? ExactScalar::h() : ExactScalar::w()}};
    }
    return {{prepend(mode, word), ExactScalar(1)}};
  }
  const Mode first = first_mode(word);
  if (mode.index < 0 && precedes_or_equal(mode, first)) {
    return {{prepend(mode, word), ExactScalar(1)}};
  }
  // K X rest = X (K rest) + [K, X] rest
  const VermaVector rest{{drop_first(word), ExactScalar(1)}};
  VermaVector out = apply(first, apply(mode, rest));
  add_to(out, apply_commutator(mode, first, rest), ExactScalar(1));
  return out;
}

VermaVector VermaEngine::apply_lambda(int p, const VermaVector& v) {
  const int top = max_level(v);
  VermaVector out;
  for (int k = -1; k <= top; ++k) add_to(out, apply(L(p - k), apply(L(k), v)), ExactScalar(1));
  for (int k = p - top; k <= -2; ++k) add_to(out, apply(L(k), apply(L(p - k), v)), ExactScalar(1));
  add_to(out, apply(L(p), v), ExactScalar(rational(-3 * (p + 2) * (p + 3), 10)));
  return out;
}

VermaVector VermaEngine::apply_commutator(const Mode& a, const Mode& b, const VermaVector& v) {
  const int m = a.index;
  const int n = b.index;
  const bool a_is_l = a.generator == Generator::L;
  const bool b_is_l = b.generator == Generator::L;
  VermaVector out;
  if (a_is_l && b_is_l) {
    add_to(out, apply(L(m + n), v), ExactScalar(m - n));
    if (m + n == 0) {
      add_to(out, v, ExactScalar::c() * rational(m * (m * m - 1), 12));
    }
  } else if (a_is_l && !b_is_l) {
    add_to(out, apply(W(m + n), v), ExactScalar(2 * m - n));
  } else if (!a_is_l && b_is_l) {
    add_to(out, apply(W(m + n), v), ExactScalar(m - 2 * n));
  } else {
    if (m + n == 0) {
      add_to(out, v, ExactScalar::c() * rational((m * m - 4) * (m * m - 1) * m, 360));
    }
    add_to(out, apply_lambda(m + n, v), ExactScalar::b_squared() * BigRational(m - n));
    add_to(out, apply(L(m + n), v),
           ExactScalar(ww_virasoro_coefficient(m, n)));
  }
  return out;
}

ExactScalar VermaEngine::inner_product(const ModeWord& u, const ModeWord& v) {
  VermaVector current{{v, ExactScalar(1)}};
  for (const Mode& m : u.modes()) {
    current = apply(Mode{m.generator, -m.index}, current);
    if (current.empty()) return {};
  }
  return omega_coefficient(current);
}

GramMatrix VermaEngine::gram_matrix(int level) {
  if (level < 0 || level > options_.level_cap) throw LevelTooLarge(level, options_.level_cap);
  GramMatrix g;
  g.level = level;
  g.basis = enumerate_basis(level);
  const std::size_t n = g.basis.size();
  g.entries.assign(n, std::vector<ExactScalar>(n));

  const auto fill_row = [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) g.entries[i][j] = inner_product(g.basis[i], g.basis[j]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options_.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) fill_row(i);
      });
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g.entries[i][j] = g.entries[j][i];
  }
  return g;
}

}  // namespace w3lab
