#include "w3lab/fock_checks.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace w3lab {

namespace {

std::vector<BiPartition> basis_up_to(int max_level) {
  std::vector<BiPartition> out;
  for (int l = 0; l <= max_level; ++l) {
    for (auto& b : fock_basis(l)) out.push_back(std::move(b));
  }
  return out;
}

std::string mode_label(const Mode& m) { return to_string(m); }

FockState apply_combination(Realization& r, const std::vector<std::pair<Mode, Complex>>& combo,
                            const FockState& v) {
  FockState out;
  for (const auto& [mode, coeff] : combo) add_to(out, r.apply(mode, v), coeff);
  return out;
}

FockState field_difference(const Field& a, const Field& b, int n, const FockState& v, const FockModule& module) {
  FockState d = a.mode(n, v, module);
  add_to(d, b.mode(n, v, module), -1.0);
  return d;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (std::abs(z.imag()) < 1e-300) {
    os << z.real();
  } else {
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  }
  return os.str();
}

}  // namespace

void ResidualReport::observe(double residual, const std::string& where) {
  if (worst_case.empty() || residual > max_residual) {
    max_residual = std::max(max_residual, residual);
    worst_case = where;
  }
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j{{"check", r.check},
                   {"params", r.params},
                   {"maxResidual", r.max_residual},
                   {"worstCase", r.worst_case},
                   {"tolerance", r.tolerance},
                   {"expectAbove", r.expect_above},
                   {"passed", r.passed()}};
  for (const auto& [key, value] : r.extra.items()) j[key] = value;
  return j;
}

bool RhoOdeReport::exact_zero() const {
  for (const auto& c : coefficients) {
    if (c != 0) return false;
  }
  return true;
}

RhoOdeReport verify_rho_ode(int max_order) {
  // rho_{-n} = i r_n; rho^2 = -r^2 and rho'_{-n} = -i(-n) i r_n = -n r_n.
  std::vector<BigInt> r(static_cast<std::size_t>(max_order) + 1);
  for (int n = 0; n <= max_order; ++n) r[n] = n == 0 ? 1 : (n % 2 == 0 ? 2 : -2);
  RhoOdeReport report;
  report.max_order = max_order;
  for (int n = 0; n <= max_order; ++n) {
    BigInt square = 0;
    for (int k = 0; k <= n; ++k) square += r[k] * r[n - k];
    // 2 (rho^2/2 + 1/2 - rho') at z^n
    const BigInt derivative = BigInt(-n) * r[n];
    report.coefficients.push_back(-square + (n == 0 ? 1 : 0) - 2 * derivative);
  }
  return report;
}

nlohmann::json to_json(const RhoOdeReport& r) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : r.coefficients) coeffs.push_back(c.get_str());
  return {{"check", "rhoOde"}, {"maxOrder", r.max_order}, {"coefficients", coeffs}, {"passed", r.exact_zero()}};
}

ResidualReport check_w3_relations(Variant variant, const RealizationParams& params, int max_mode_index,
                                  int max_level, double tolerance) {
  Realization r(variant, params);
  ResidualReport report;
  report.check = "w3Relations:" + to_string(variant);
  report.params = to_json(params);
  report.params["maxModeIndex"] = max_mode_index;
  report.params["maxLevel"] = max_level;
  report.tolerance = tolerance;

  const double c = params.c();
  const double b2 = params.b() * params.b();
  for (const auto& basis : basis_up_to(max_level)) {
    const FockState v = basis_state(basis);
    for (int ga = 0; ga < 2; ++ga) {
      for (int gb = 0; gb < 2; ++gb) {
        for (int m = -max_mode_index; m <= max_mode_index; ++m) {
          for (int n = -max_mode_index; n <= max_mode_index; ++n) {
            const Mode x{static_cast<Generator>(ga), m};
            const Mode y{static_cast<Generator>(gb), n};
            FockState residual = r.apply(x, r.apply(y, v));
            add_to(residual, r.apply(y, r.apply(x, v)), -1.0);
            if (ga == 0 && gb == 0) {
              add_to(residual, r.L(m + n, v), -static_cast<double>(m - n));
              if (m + n == 0) add_to(residual, v, -c / 12.0 * m * (m * m - 1));
            } else if (ga == 0) {
              add_to(residual, r.W(m + n, v), -static_cast<double>(2 * m - n));
            } else if (gb == 0) {
              add_to(residual, r.W(m + n, v), -static_cast<double>(m - 2 * n));
            } else {
              if (m + n == 0) add_to(residual, v, -c / 360.0 * m * (m * m - 1) * (m * m - 4));
              add_to(residual, r.lambda(m + n, v), -b2 * (m - n));
              add_to(residual, r.L(m + n, v), -ww_virasoro_coefficient(m, n).get_d());
            }
            report.observe(max_abs(residual),
                           "[" + mode_label(x) + "," + mode_label(y) + "] on " + basis.to_string());
          }
        }
      }
    }
  }

  const FockState omega = vacuum();
  const Complex h = r.L(0, omega)[BiPartition{}];
  const Complex vev = r.L(2, r.L(-2, omega))[BiPartition{}];
  const Complex extracted = 2.0 * (vev - 4.0 * h);
  const double error = std::abs(extracted - c);
  report.extra["centralCharge"] = {{"re", extracted.real()}, {"im", extracted.imag()}};
  report.extra["expectedCentralCharge"] = c;
  report.extra["centralChargeError"] = error;
  report.observe(error, "central charge");
  return report;
}

ResidualReport compare_fields(const std::string& name, const W3Fields& a, const W3Fields& b,
                              const RealizationParams& params, int max_mode_index, int max_level,
                              double tolerance) {
  ResidualReport report;
  report.check = name;
  report.params = to_json(params);
  report.tolerance = tolerance;
  const FockModule module = params.module();
  for (const auto& basis : basis_up_to(max_level)) {
    const FockState v = basis_state(basis);
    for (int n = -max_mode_index; n <= max_mode_index; ++n) {
      report.observe(max_abs(field_difference(a.T, b.T, n, v, module)),
                     "T_" + std::to_string(n) + " on " + basis.to_string());
      report.observe(max_abs(field_difference(a.M, b.M, n, v, module)),
                     "M_" + std::to_string(n) + " on " + basis.to_string());
    }
  }
  return report;
}

ResidualReport check_automorphism_identity(double kappa, Complex eta, const RealizationParams& params,
                                           int max_mode_index, int max_level, double tolerance) {
  const Series rho = Series::rho();
  const Series f = Complex(kappa) * rho + Series::constant(eta);
  const Field j = Field::current(1);
  // phi(T_kappa) built from J + f
  const Field lhs = 0.5 * shifted_normal_square(1, f) + Complex(kappa) * (j.derivative() + Field::scalar(f.derivative())) -
                    Complex(kappa) * (rho * j) - Complex(kappa) * Field::scalar(rho * f);
  const Field rhs = 0.5 * Field::normal_power(1, 2) + Complex(kappa) * j.derivative() + eta * j +
                    Field::constant((kappa * kappa + eta * eta) / 2.0);

  ResidualReport report;
  report.check = "automorphismIdentity";
  report.params = to_json(params);
  report.params["kappa"] = kappa;
  report.params["etaRe"] = eta.real();
  report.params["etaIm"] = eta.imag();
  report.tolerance = tolerance;
  const FockModule module = params.module();
  for (const auto& basis : basis_up_to(max_level)) {
    const FockState v = basis_state(basis);
    for (int n = -max_mode_index; n <= max_mode_index; ++n) {
      report.observe(max_abs(field_difference(lhs, rhs, n, v, module)),
                     "mode " + std::to_string(n) + " on " + basis.to_string());
    }
  }
  return report;
}

double adjoint_defect(Realization& realization, const std::vector<std::pair<Mode, Complex>>& a,
                      const std::vector<std::pair<Mode, Complex>>& a_dagger, int max_level) {
  const auto basis = basis_up_to(max_level);
  std::vector<FockState> image;
  std::vector<FockState> image_dagger;
  for (const auto& b : basis) {
    image.push_back(apply_combination(realization, a, basis_state(b)));
    image_dagger.push_back(apply_combination(realization, a_dagger, basis_state(b)));
  }
  double worst = 0.0;
  for (std::size_t u = 0; u < basis.size(); ++u) {
    const FockState bu = basis_state(basis[u]);
    for (std::size_t v = 0; v < basis.size(); ++v) {
      const FockState bv = basis_state(basis[v]);
      const Complex lhs = fock_inner(bu, image[v]);
      const Complex rhs = fock_inner(image_dagger[u], bv);
      const double scale = std::sqrt(fock_norm(basis[u]) * fock_norm(basis[v]));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return worst;
}

bool WeakSymmetryReport::passed() const { return pairs.passed() && triples.passed() && control.passed(); }

WeakSymmetryReport check_weak_symmetry(const RealizationParams& params, int max_mode_index, int max_level,
                                       double tolerance) {
  Realization r(Variant::VacuumModified, params);
  WeakSymmetryReport report;
  for (auto* part : {&report.pairs, &report.triples, &report.control}) {
    part->params = to_json(params);
    part->tolerance = tolerance;
  }
  report.pairs.check = "weakSymmetry:Lpairs";
  report.triples.check = "weakSymmetry:Wtriples";
  report.control.check = "weakSymmetry:unpairedControl";
  if (params.kappa != 0.0) {
    report.control.expect_above = true;
    report.control.tolerance = 1e-3;
  }

  const int top = max_mode_index;
  for (int n = -top; n <= top; ++n) {
    for (int m = -top; m <= top; ++m) {
      if (m == n) continue;
      const double sign = ((n - m) % 2 == 0) ? 1.0 : -1.0;
      const double d = adjoint_defect(r, {{L(n), 1.0}, {L(m), -sign}}, {{L(-n), 1.0}, {L(-m), -sign}}, max_level);
      report.pairs.observe(d, "L" + std::to_string(n) + " - (-1)^(n-m) L" + std::to_string(m));
    }
  }
  const auto parity = [](int n) { return n % 2 == 0 ? 1.0 : -1.0; };
  for (int n1 = -top; n1 <= top; ++n1) {
    for (int n2 = n1 + 1; n2 <= top; ++n2) {
      for (int n3 = n2 + 1; n3 <= top; ++n3) {
        const double s1 = parity(n1);
        const double s2 = parity(n2);
        const double s3 = parity(n3);
        const double det = s2 * s3 * (n3 - n2);
        const double u = s1 * s3 * (n1 - n3) / det;
        const double dd = s1 * s2 * (n2 - n1) / det;
        const double defect = adjoint_defect(r, {{W(n1), 1.0}, {W(n2), u}, {W(n3), dd}},
                                             {{W(-n1), 1.0}, {W(-n2), u}, {W(-n3), dd}}, max_level);
        report.triples.observe(defect, "W" + std::to_string(n1) + " + u W" + std::to_string(n2) + " + d W" +
                                           std::to_string(n3));
      }
    }
  }
  for (int n = -top; n <= top; ++n) {
    report.control.observe(adjoint_defect(r, {{L(n), 1.0}}, {{L(-n), 1.0}}, max_level), "L" + std::to_string(n));
  }
  return report;
}

nlohmann::json to_json(const WeakSymmetryReport& r) {
  return {{"check", "weakSymmetry"},
          {"pairs", to_json(r.pairs)},
          {"triples", to_json(r.triples)},
          {"control", to_json(r.control)},
          {"passed", r.passed()}};
}

double CyclicGram::min_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }

CyclicGram cyclic_gram(Realization& realization, int level) {
  CyclicGram g;
  std::vector<FockState> vectors;
  for (int l = 0; l <= level; ++l) {
    for (const auto& word : enumerate_basis(l)) {
      g.words.push_back(word);
      vectors.push_back(realization.word_state(word));
    }
  }
  const auto n = static_cast<Eigen::Index>(vectors.size());
  g.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g.matrix(i, j) = fock_inner(vectors[i], vectors[j]);
  }
  const Eigen::MatrixXcd hermitian = (g.matrix + g.matrix.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < n; ++i) g.eigenvalues.push_back(solver.eigenvalues()(i));
  return g;
}

CyclicGram cyclic_gram(Variant variant, const RealizationParams& params, int level) {
  Realization r(variant, params);
  return cyclic_gram(r, level);
}

std::string to_csv(const CyclicGram& g) {
  std::ostringstream os;
  os << "word";
  for (const auto& w : g.words) os << "," << w.to_string();
  os << "\r\n";
  for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
    os << g.words[static_cast<std::size_t>(i)].to_string();
    for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) os << "," << format_complex(g.matrix(i, j));
    os << "\r\n";
  }
  return os.str();
}

double ZeroVectorReport::max() const { return std::max({l_minus1, w_minus1, w_minus2}); }

ZeroVectorReport zero_vectors(Variant variant, const RealizationParams& params) {
  Realization r(variant, params);
  const auto norm = [&](const Mode& m) { return std::sqrt(std::abs(fock_inner(r.apply(m, vacuum()), r.apply(m, vacuum())))); };
  return {norm(L(-1)), norm(W(-1)), norm(W(-2))};
}

}  // namespace w3lab
