#include "w3lab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace w3lab {

namespace {

const Complex kI{0.0, 1.0};

std::vector<int>& part_of(BiPartition& b, int which) { return which == 1 ? b.part1 : b.part2; }

void check_cutoff(int level, const FockModule& module) {
  if (level > module.cutoff) throw CutoffExceeded(level, module.cutoff);
}

// a_n on a single basis vector.
FockState current_on_basis(const FockModule& module, int which, int n, const BiPartition& b) {
  if (n == 0) {
    const double q = module.zero_mode(which);
    if (q == 0.0) return {};
    return {{b, Complex(q)}};
  }
  BiPartition out = b;
  auto& part = part_of(out, which);
  if (n < 0) {
    check_cutoff(b.level() - n, module);
    part.insert(std::upper_bound(part.begin(), part.end(), -n, std::greater<>()), -n);
    return {{std::move(out), Complex(1.0)}};
  }
  const auto range = std::equal_range(part.begin(), part.end(), n, std::greater<>());
  const long count = std::distance(range.first, range.second);
  if (count == 0) return {};
  part.erase(range.first);
  return {{std::move(out), Complex(static_cast<double>(n * count))}};
}

template <typename PerBasis>
FockState linear_extension(const FockState& v, PerBasis&& per_basis) {
  FockState out;
  for (const auto& [b, coeff] : v) add_to(out, per_basis(b), coeff);
  return out;
}

// Ordered product a_{i_1} ... a_{i_k} on a basis vector, rightmost first.
FockState apply_ordered(const FockModule& module, int which, const std::vector<int>& indices,
                        const BiPartition& b) {
  FockState state{{b, Complex(1.0)}};
  for (auto it = indices.rbegin(); it != indices.rend() && !state.empty(); ++it) {
    state = linear_extension(state, [&](const BiPartition& key) {
      return current_on_basis(module, which, *it, key);
    });
  }
  return state;
}

FockState normal_power_on_basis(const FockModule& module, int which, int power, int n,
                                const BiPartition& b) {
  const int level = b.level();
  const int lo = n - (power - 1) * level;
  const int hi = level;
  FockState out;
  std::vector<int> indices(static_cast<std::size_t>(power));
  // every ordered tuple (i_1..i_p) with sum n; normal order puts larger indices to the right
  const std::function<void(int, int)> visit = [&](int slot, int remaining) {
    if (slot == power - 1) {
      if (remaining < lo || remaining > hi) return;
      indices[slot] = remaining;
      std::vector<int> sorted = indices;
      std::sort(sorted.begin(), sorted.end());
      add_to(out, apply_ordered(module, which, sorted, b));
      return;
    }
    for (int i = lo; i <= hi; ++i) {
      indices[slot] = i;
      visit(slot + 1, remaining - i);
    }
  };
  visit(0, n);
  return out;
}

}  // namespace

int BiPartition::level() const {
  return std::accumulate(part1.begin(), part1.end(), 0) + std::accumulate(part2.begin(), part2.end(), 0);
}

std::string BiPartition::to_string() const {
  std::ostringstream os;
  bool first = true;
  const auto emit = [&](const std::vector<int>& part, int which) {
    for (int k : part) {
      os << (first ? "" : " ") << "a" << which << "_-" << k;
      first = false;
    }
  };
  emit(part1, 1);
  emit(part2, 2);
  return first ? "Omega" : os.str();
}

FockState vacuum() { return {{BiPartition{}, Complex(1.0)}}; }

FockState basis_state(const BiPartition& b) { return {{b, Complex(1.0)}}; }

int max_level(const FockState& v) {
  int level = 0;
  for (const auto& [b, coeff] : v) level = std::max(level, b.level());
  return level;
}

void add_to(FockState& into, const FockState& from, Complex factor) {
  if (factor == Complex(0.0)) return;
  for (const auto& [b, coeff] : from) {
    auto [it, inserted] = into.try_emplace(b, coeff * factor);
    if (!inserted) it->second += coeff * factor;
    if (std::abs(it->second) < kPruneThreshold) into.erase(it);
  }
}

FockState scaled(const FockState& v, Complex factor) {
  FockState out;
  add_to(out, v, factor);
  return out;
}

double max_abs(const FockState& v) {
  double m = 0.0;
  for (const auto& [b, coeff] : v) m = std::max(m, std::abs(coeff));
  return m;
}

double fock_norm(const BiPartition& b) {
  double norm = 1.0;
  for (const auto* part : {&b.part1, &b.part2}) {
    std::map<int, int> multiplicity;
    for (int k : *part) ++multiplicity[k];
    for (const auto& [k, m] : multiplicity) {
      norm *= std::pow(static_cast<double>(k), m) * std::tgamma(m + 1.0);
    }
  }
  return norm;
}

Complex fock_inner(const FockState& u, const FockState& v) {
  Complex total(0.0);
  for (const auto& [b, coeff] : u) {
    if (auto it = v.find(b); it != v.end()) total += std::conj(coeff) * it->second * fock_norm(b);
  }
  return total;
}

std::vector<BiPartition> fock_basis(int level) {
  std::vector<BiPartition> out;
  const std::function<void(int, int, std::vector<int>&, std::vector<std::vector<int>>&)> partitions =
      [&](int n, int max_part, std::vector<int>& current, std::vector<std::vector<int>>& acc) {
        if (n == 0) {
          acc.push_back(current);
          return;
        }
        for (int p = std::min(n, max_part); p >= 1; --p) {
          current.push_back(p);
          partitions(n - p, p, current, acc);
          current.pop_back();
        }
      };
  for (int first = level; first >= 0; --first) {
    std::vector<std::vector<int>> a;
    std::vector<std::vector<int>> b;
    std::vector<int> scratch;
    partitions(first, first, scratch, a);
    partitions(level - first, level - first, scratch, b);
    for (const auto& pa : a) {
      for (const auto& pb : b) out.push_back(BiPartition{pa, pb});
    }
  }
  return out;
}

FockState current_mode(const FockModule& module, int which, int n, const FockState& v) {
  return linear_extension(v, [&](const BiPartition& b) { return current_on_basis(module, which, n, b); });
}

FockState normal_power_mode(const FockModule& module, int which, int power, int n, const FockState& v) {
  if (power < 1 || power > 3) throw std::invalid_argument("normal power must be 1, 2 or 3");
  return linear_extension(v, [&](const BiPartition& b) {
    return normal_power_on_basis(module, which, power, n, b);
  });
}

FockState normal_power3_recursive(const FockModule& module, int which, int n, const FockState& v) {
  const int level = max_level(v);
  FockState out;
  // J_+ G: creation modes of J to the left of :J^2:
  for (int i = n - level; i <= -1; ++i) {
    add_to(out, current_mode(module, which, i, normal_power_mode(module, which, 2, n - i, v)));
  }
  // G J_-
  for (int i = 0; i <= level; ++i) {
    add_to(out, normal_power_mode(module, which, 2, n - i, current_mode(module, which, i, v)));
  }
  return out;
}

Series::Series() : Series([](int) { return Complex(0.0); }) {}

Series::Series(std::function<Complex(int)> coefficient)
    : coefficient_(std::make_shared<const std::function<Complex(int)>>(std::move(coefficient))) {}

Series Series::constant(Complex value) {
  return Series([value](int n) { return n == 0 ? value : Complex(0.0); });
}

Series Series::rho() {
  return Series([](int n) {
    if (n > 0) return Complex(0.0);
    if (n == 0) return kI;
    return (n % 2 == 0 ? 2.0 : -2.0) * kI;
  });
}

Complex Series::operator[](int n) const { return n > 0 ? Complex(0.0) : (*coefficient_)(n); }

Series Series::derivative() const {
  const Series self = *this;
  return Series([self](int n) { return -kI * static_cast<double>(n) * self[n]; });
}

Series operator+(const Series& a, const Series& b) {
  return Series([a, b](int n) { return a[n] + b[n]; });
}

Series operator-(const Series& a, const Series& b) {
  return Series([a, b](int n) { return a[n] - b[n]; });
}

Series operator*(Complex k, const Series& a) {
  return Series([k, a](int n) { return k * a[n]; });
}

Series operator*(const Series& a, const Series& b) {
  return Series([a, b](int n) {
    Complex total(0.0);
    for (int k = n; k <= 0; ++k) total += a[k] * b[n - k];
    return total;
  });
}

std::vector<Complex> rho_coefficients(int max_order) {
  const Series rho = Series::rho();
  std::vector<Complex> out;
  for (int k = 0; k <= max_order; ++k) out.push_back(rho[-k]);
  return out;
}

struct Field::Node {
  virtual ~Node() = default;
  virtual FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const = 0;
  virtual unsigned currents() const = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Field::Node>;

struct CurrentNode : Field::Node {
  int which;
  explicit CurrentNode(int w) : which(w) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    return current_on_basis(module, which, n, b);
  }
  unsigned currents() const override { return 1U << (which - 1); }
};

struct NormalPowerNode : Field::Node {
  int which;
  int power;
  NormalPowerNode(int w, int p) : which(w), power(p) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    return normal_power_on_basis(module, which, power, n, b);
  }
  unsigned currents() const override { return 1U << (which - 1); }
};

struct ScalarNode : Field::Node {
  Series series;
  explicit ScalarNode(Series s) : series(std::move(s)) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule&) const override {
    const Complex s = series[n];
    if (std::abs(s) < kPruneThreshold) return {};
    return {{b, s}};
  }
  unsigned currents() const override { return 0; }
};

struct DerivativeNode : Field::Node {
  NodePtr inner;
  explicit DerivativeNode(NodePtr f) : inner(std::move(f)) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    if (n == 0) return {};
    return scaled(inner->mode_on_basis(n, b, module), -kI * static_cast<double>(n));
  }
  unsigned currents() const override { return inner->currents(); }
};

struct LinearNode : Field::Node {
  std::vector<std::pair<Complex, NodePtr>> terms;
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    FockState out;
    for (const auto& [k, node] : terms) add_to(out, node->mode_on_basis(n, b, module), k);
    return out;
  }
  unsigned currents() const override {
    unsigned mask = 0;
    for (const auto& [k, node] : terms) mask |= node->currents();
    return mask;
  }
};

FockState node_mode(const Field::Node& node, int n, const FockState& v, const FockModule& module) {
  return linear_extension(v, [&](const BiPartition& b) { return node.mode_on_basis(n, b, module); });
}

// (s F)_n = sum_{k <= 0} s_k F_{n-k}; F_{n-k} vanishes on level l once n-k > l.
struct SeriesTimesNode : Field::Node {
  Series series;
  NodePtr inner;
  SeriesTimesNode(Series s, NodePtr f) : series(std::move(s)), inner(std::move(f)) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    FockState out;
    for (int k = n - b.level(); k <= 0; ++k) {
      const Complex s = series[k];
      if (std::abs(s) < kPruneThreshold) continue;
      add_to(out, inner->mode_on_basis(n - k, b, module), s);
    }
    return out;
  }
  unsigned currents() const override { return inner->currents(); }
};

// (F G)_n = sum_j F_{n-j} G_j for commuting F, G; the factor with the larger index acts first.
struct ProductNode : Field::Node {
  NodePtr left;
  NodePtr right;
  ProductNode(NodePtr f, NodePtr g) : left(std::move(f)), right(std::move(g)) {}
  FockState mode_on_basis(int n, const BiPartition& b, const FockModule& module) const override {
    const int level = b.level();
    FockState out;
    for (int j = n - level; j <= level; ++j) {
      const int i = n - j;
      FockState first;
      if (j >= i) {
        first = right->mode_on_basis(j, b, module);
        if (first.empty()) continue;
        add_to(out, node_mode(*left, i, first, module));
      } else {
        first = left->mode_on_basis(i, b, module);
        if (first.empty()) continue;
        add_to(out, node_mode(*right, j, first, module));
      }
    }
    return out;
  }
  unsigned currents() const override { return left->currents() | right->currents(); }
};

std::shared_ptr<LinearNode> linear_of(const NodePtr& node, Complex k) {
  auto out = std::make_shared<LinearNode>();
  if (const auto* lin = dynamic_cast<const LinearNode*>(node.get())) {
    for (const auto& [c, inner] : lin->terms) out->terms.emplace_back(k * c, inner);
  } else {
    out->terms.emplace_back(k, node);
  }
  return out;
}

}  // namespace

Field::Field() : node_(std::make_shared<LinearNode>()) {}
Field::Field(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Field Field::current(int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("current index must be 1 or 2");
  return Field(std::make_shared<CurrentNode>(which));
}

Field Field::normal_power(int which, int power) {
  if (which != 1 && which != 2) throw std::invalid_argument("current index must be 1 or 2");
  if (power < 1 || power > 3) throw std::invalid_argument("normal power must be 1, 2 or 3");
  return Field(std::make_shared<NormalPowerNode>(which, power));
}

Field Field::scalar(const Series& s) { return Field(std::make_shared<ScalarNode>(s)); }

Field Field::derivative() const { return Field(std::make_shared<DerivativeNode>(node_)); }

Field Field::product(const Field& f, const Field& g) {
  if ((f.currents() & g.currents()) != 0) {
    throw std::invalid_argument("product of fields sharing a current needs normal ordering");
  }
  return Field(std::make_shared<ProductNode>(f.node_, g.node_));
}

Field operator+(const Field& a, const Field& b) {
  auto out = linear_of(a.node_, 1.0);
  const auto rhs = linear_of(b.node_, 1.0);
  for (auto& term : rhs->terms) out->terms.push_back(std::move(term));
  return Field(out);
}

Field operator-(const Field& a, const Field& b) { return a + Complex(-1.0) * b; }

Field operator*(Complex k, const Field& a) { return Field(linear_of(a.node_, k)); }

Field operator*(const Series& s, const Field& a) {
  return Field(std::make_shared<SeriesTimesNode>(s, a.node_));
}

FockState Field::mode(int n, const FockState& v, const FockModule& module) const {
  return node_mode(*node_, n, v, module);
}

unsigned Field::currents() const { return node_->currents(); }

Field shifted_normal_square(int which, const Series& shift) {
  return Field::normal_power(which, 2) + Complex(2.0) * (shift * Field::current(which)) +
         Field::scalar(shift * shift);
}

ModeOperator current_operator(const FockModule& module, int which, int n) {
  return ModeOperator(n, [module, which, n](const FockState& v) { return current_mode(module, which, n, v); });
}

ModeOperator normal_power_operator(const FockModule& module, int which, int power, int n) {
  return ModeOperator(n, [module, which, power, n](const FockState& v) {
    return normal_power_mode(module, which, power, n, v);
  });
}

Variant parse_variant(const std::string& name) {
  if (name == "raw") return Variant::Raw;
  if (name == "vacuumModified" || name == "vacuum-modified") return Variant::VacuumModified;
  if (name == "unitaryFamily" || name == "unitary-family") return Variant::UnitaryFamily;
  throw std::invalid_argument("unknown variant '" + name + "' (raw, vacuumModified, unitaryFamily)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Raw:
      return "raw";
    case Variant::VacuumModified:
      return "vacuumModified";
    case Variant::UnitaryFamily:
      return "unitaryFamily";
  }
  return "unknown";
}

double RealizationParams::b() const { return b_sign * 4.0 / std::sqrt(22.0 + 5.0 * c()); }

nlohmann::json to_json(const RealizationParams& p) {
  return {{"kappa", p.kappa}, {"q1", p.q1},         {"q2", p.q2},         {"etaRe", p.eta.real()},
          {"etaIm", p.eta.imag()}, {"cutoff", p.cutoff}, {"bSign", p.b_sign}, {"c", p.c()}};
}

W3Fields fz_fields_shifted(const Series& shift, const RealizationParams& params) {
  const double kappa = params.kappa;
  const double b = params.b();
  const double s2 = std::sqrt(2.0);
  const Field x = Field::current(1) + Field::scalar(shift);
  const Field dx = x.derivative();
  const Field x_sq = shifted_normal_square(1, shift);
  const Field j2 = Field::current(2);
  const Field dj2 = j2.derivative();
  const Field ddj2 = dj2.derivative();

  W3Fields f;
  f.T = 0.5 * x_sq - Complex(0.0, kappa) * (x + kI * dx) + 0.5 * Field::normal_power(2, 2);
  f.M = Complex(b / (3.0 * s2)) * Field::normal_power(2, 3) -
        Complex(b / s2) * Field::product(x_sq - Complex(0.0, 2.0 * kappa) * (x + kI * dx), j2) +
        Complex(3.0 * b * kappa / (2.0 * s2)) * (Field::product(dx, j2) - Field::product(x, dj2)) +
        Complex(b * kappa * kappa / (2.0 * s2)) * (Complex(2.0) * j2 + Complex(0.0, 3.0) * dj2 - ddj2);
  return f;
}

W3Fields fz_fields(Variant variant, const RealizationParams& params) {
  const double kappa = params.kappa;
  const double b = params.b();
  const double s2 = std::sqrt(2.0);
  const Field j1 = Field::current(1);
  const Field j2 = Field::current(2);
  const Field dj1 = j1.derivative();
  const Field dj2 = j2.derivative();
  const Field ddj2 = dj2.derivative();
  const Field t1 = 0.5 * Field::normal_power(1, 2);
  const Field t2 = 0.5 * Field::normal_power(2, 2);
  const Field w_cubic = Complex(b / (3.0 * s2)) * Field::normal_power(2, 3);

  switch (variant) {
    case Variant::Raw:
      return fz_fields_shifted(Series(), params);
    case Variant::VacuumModified: {
      const Series rho = Series::rho();
      const Field t1k = t1 + Complex(kappa) * (dj1 - rho * j1);
      W3Fields f;
      f.T = t1k + t2;
      f.M = w_cubic - Complex(s2 * b) * Field::product(t1k, j2) +
            Complex(3.0 * b * kappa / (2.0 * s2)) *
                (Field::product(dj1 - Field::scalar(kappa * rho.derivative()), j2) -
                 Field::product(j1 - Field::scalar(kappa * rho), dj2)) +
            Complex(b * kappa * kappa / (2.0 * s2)) * (Complex(2.0) * j2 - ddj2);
      return f;
    }
    case Variant::UnitaryFamily: {
      const Field t1u = t1 + Complex(kappa) * dj1 + Field::constant(kappa * kappa / 2.0);
      W3Fields f;
      f.T = t1u + t2;
      f.M = w_cubic - Complex(s2 * b) * Field::product(t1u, j2) +
            Complex(3.0 * b * kappa / (2.0 * s2)) * Field::product(dj1, j2) -
            Complex(3.0 * b * kappa / (2.0 * s2)) * Field::product(j1, dj2) +
            Complex(b * kappa * kappa / s2) * j2 - Complex(b * kappa * kappa / (2.0 * s2)) * ddj2;
      return f;
    }
  }
  throw std::invalid_argument("unknown variant");
}

ModeOperator fz_field_mode(FieldKind field, Variant variant, int n, const RealizationParams& params) {
  const W3Fields fields = fz_fields(variant, params);
  const Field f = field == FieldKind::T ? fields.T : fields.M;
  const FockModule module = params.module();
  return ModeOperator(n, [f, n, module](const FockState& v) { return f.mode(n, v, module); });
}

std::pair<Complex, Complex> lowest_weight(Variant variant, const RealizationParams& params) {
  const double k = params.kappa;
  const double q1 = params.q1;
  const double q2 = params.q2;
  const double b = params.b();
  const double s2 = std::sqrt(2.0);
  if (variant == Variant::UnitaryFamily) {
    return {Complex((q1 * q1 + q2 * q2 + k * k) / 2.0), Complex(b * (q2 * q2 * q2 - 3.0 * q1 * q1 * q2) / (3.0 * s2))};
  }
  const Complex h = 0.5 * q1 * q1 + 0.5 * q2 * q2 - kI * k * q1;
  const Complex w = b / s2 * (q2 * q2 * q2 / 3.0 - (q1 * q1 - 2.0 * kI * k * q1) * q2 + k * k * q2);
  return {h, w};
}

Realization::Realization(Variant variant, const RealizationParams& params)
    : Realization(fz_fields(variant, params), params) {}

Realization::Realization(W3Fields fields, const RealizationParams& params)
    : fields_(std::move(fields)), params_(params), module_(params.module()) {}

FockState Realization::apply(const Mode& mode, const FockState& v) {
  const Field& field = mode.generator == Generator::L ? fields_.T : fields_.M;
  FockState out;
  for (const auto& [b, coeff] : v) {
    const auto key = std::make_tuple(static_cast<int>(mode.generator), mode.index, b);
    std::optional<FockState> image;
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) image = it->second;
    }
    if (!image) {
      image = field.mode(mode.index, basis_state(b), module_);
      std::lock_guard lock(mutex_);
      cache_.emplace(key, *image);
    }
    add_to(out, *image, coeff);
  }
  return out;
}

FockState Realization::lambda(int p, const FockState& v) {
  const int top = max_level(v);
  FockState out;
  for (int k = -1; k <= top; ++k) add_to(out, L(p - k, L(k, v)));
  for (int k = p - top; k <= -2; ++k) add_to(out, L(k, L(p - k, v)));
  add_to(out, L(p, v), -0.3 * (p + 2) * (p + 3));
  return out;
}

FockState Realization::word_state(const ModeWord& word) {
  FockState state = vacuum();
  const auto modes = word.modes();
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) state = apply(*it, state);
  return state;
}

}  // namespace w3lab
