#pragma once

// Unitarity of the irreducible lowest-weight W3 representation at (c, h, w).
//
//  2 <= c <= 98 : unitary iff f_11(h,c) - w^2 >= 0
//  c > 98      : unitary inside h >= (c-2)/24, |w| <= sqrt(8/(198+45c)) (2h - (c-2)/12)^{3/2};
//                not unitary when f_11 - w^2 < 0; unknown otherwise
//  c < 2       : unknown
// The vacuum h = w = 0 is unitary for every c >= 2. f_11 is the level-one Kac
// factor 2h^2(96h - 3(c-2)) / (27(5c+22)), the diagonal f_mm at m = 1.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "w3lab/exact.hpp"

namespace w3lab {

enum class Status { Unitary, NotUnitary, Unknown };
enum class Witness { VacuumTheorem, FirstKacDeterminant, ConstructiveFamily, NecessaryConditionFailed, OutOfClassifiedRegion };

std::string to_string(Status s);
std::string to_string(Witness w);

struct UnitarityVerdict {
  Status status = Status::Unknown;
  Witness witness = Witness::OutOfClassifiedRegion;
  double c = 0.0;
  double h = 0.0;
  double w = 0.0;
  double f11_minus_w2 = 0.0;
  /// sqrt(8/(198+45c)) (2h - (c-2)/12)^{3/2}; absent when h < (c-2)/24.
  std::optional<double> constructive_bound;
  /// m with c = 2(1 - 12/(m(m+1))), m >= 4, when c matches a discrete-series value.
  std::optional<int> discrete_series_m;
  /// Decided in exact rational arithmetic.
  bool exact = false;
};

nlohmann::json to_json(const UnitarityVerdict& v);

/// f_11(h,c) - w^2.
double first_kac_quantity(double c, double h, double w);
BigRational first_kac_quantity(const BigRational& c, const BigRational& h, const BigRational& w);

UnitarityVerdict classify(double c, double h, double w);
UnitarityVerdict classify(const BigRational& c, const BigRational& h, const BigRational& w);

struct RegionScan {
  double c = 0.0;
  std::vector<UnitarityVerdict> points;  // row-major, h outer
};

/// resolution x resolution grid over h in [h_min, h_max], w in [w_min, w_max];
/// rows are split over `threads` workers.
RegionScan region_scan(double c, double h_min, double h_max, double w_min, double w_max, int resolution,
                       unsigned threads = 1);

std::string csv_header();
std::string to_csv_row(const UnitarityVerdict& v);
std::string to_csv(const RegionScan& scan);

}  // namespace w3lab
