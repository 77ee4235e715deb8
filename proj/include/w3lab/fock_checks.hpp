#pragma once

// Numerical checks on the truncated Fock realization.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "w3lab/exact.hpp"
#include "w3lab/fock.hpp"

namespace w3lab {

struct ResidualReport {
  std::string check;
  nlohmann::json params;
  double max_residual = 0.0;
  std::string worst_case;
  double tolerance = 0.0;
  /// Negative controls pass when the residual exceeds the tolerance.
  bool expect_above = false;
  nlohmann::json extra = nlohmann::json::object();

  bool passed() const { return expect_above ? max_residual > tolerance : max_residual <= tolerance; }
  /// Record a residual, keeping the worst case.
  void observe(double residual, const std::string& where);
};

nlohmann::json to_json(const ResidualReport& r);

/// Coefficients of 2 (rho^2/2 + 1/2 - rho') at z^0 ... z^maxOrder, in integer
/// arithmetic through rho = i r with r_0 = 1, r_{-n} = 2(-1)^n.
struct RhoOdeReport {
  int max_order = 0;
  std::vector<BigInt> coefficients;
  bool exact_zero() const;
};

RhoOdeReport verify_rho_ode(int max_order);
nlohmann::json to_json(const RhoOdeReport& r);

/// [X_m, Y_n] - RHS on every basis state of level <= maxLevel, |m|,|n| <= maxModeIndex.
/// extra holds the central charge extracted from <Omega, L_2 L_-2 Omega>.
ResidualReport check_w3_relations(Variant variant, const RealizationParams& params, int max_mode_index,
                                  int max_level, double tolerance = 1e-9);

/// phi_{kappa,eta}(T_kappa) = T_0 + kappa J' + eta J + (kappa^2 + eta^2)/2 on current 1.
ResidualReport check_automorphism_identity(double kappa, Complex eta, const RealizationParams& params,
                                           int max_mode_index, int max_level, double tolerance = 1e-10);

/// Largest deviation between two field sets over modes |n| <= maxModeIndex and
/// states of level <= maxLevel.
ResidualReport compare_fields(const std::string& name, const W3Fields& a, const W3Fields& b,
                              const RealizationParams& params, int max_mode_index, int max_level,
                              double tolerance);

struct WeakSymmetryReport {
  ResidualReport pairs;     // L_n - (-1)^{n-m} L_m
  ResidualReport triples;   // W_{n1} + u W_{n2} + d W_{n3}
  ResidualReport control;   // unpaired L_n, expected to fail for kappa != 0

  bool passed() const;
};

WeakSymmetryReport check_weak_symmetry(const RealizationParams& params, int max_mode_index,
                                       int max_level, double tolerance = 1e-9);
nlohmann::json to_json(const WeakSymmetryReport& r);

/// Adjoint defect max |<u, A v> - <A^dag u, v>| / sqrt(|u| |v|) over basis pairs.
double adjoint_defect(Realization& realization, const std::vector<std::pair<Mode, Complex>>& a,
                      const std::vector<std::pair<Mode, Complex>>& a_dagger, int max_level);

struct CyclicGram {
  std::vector<ModeWord> words;
  Eigen::MatrixXcd matrix;
  std::vector<double> eigenvalues;  // ascending

  double min_eigenvalue() const;
};

/// Gram matrix of all Verma words of level <= N applied to Omega_{q1,q2}.
CyclicGram cyclic_gram(Variant variant, const RealizationParams& params, int level);
CyclicGram cyclic_gram(Realization& realization, int level);
std::string to_csv(const CyclicGram& g);

/// Norms of L_-1 Omega, W_-1 Omega and W_-2 Omega.
struct ZeroVectorReport {
  double l_minus1 = 0.0;
  double w_minus1 = 0.0;
  double w_minus2 = 0.0;
  double max() const;
};

ZeroVectorReport zero_vectors(Variant variant, const RealizationParams& params);

}  // namespace w3lab
