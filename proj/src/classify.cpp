#include "w3lab/classify.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "w3lab/kac.hpp"

namespace w3lab {

namespace {

std::optional<int> discrete_series_index(double c) {
  if (c >= 2.0) return std::nullopt;
  // m(m+1) = 24/(2-c)
  const double target = 24.0 / (2.0 - c);
  const double m = (-1.0 + std::sqrt(1.0 + 4.0 * target)) / 2.0;
  const long rounded = std::lround(m);
  if (rounded < 4) return std::nullopt;
  const double c_m = 2.0 * (1.0 - 12.0 / (static_cast<double>(rounded) * (rounded + 1)));
  if (std::abs(c_m - c) <= 1e-12 * std::max(1.0, std::abs(c))) return static_cast<int>(rounded);
  return std::nullopt;
}

std::optional<int> discrete_series_index(const BigRational& c) {
  if (c >= 2) return std::nullopt;
  const auto approx = discrete_series_index(c.get_d());
  if (!approx) return std::nullopt;
  const long m = *approx;
  const BigRational c_m = 2 * (1 - BigRational(12) / BigRational(m * (m + 1)));
  return c_m == c ? approx : std::nullopt;
}

// Correctly rounded when numerator and denominator are below 2^53.
double to_double(const BigRational& q) {
  const BigInt limit = BigInt(1) << 53;
  if (abs(q.get_num()) < limit && q.get_den() < limit) return q.get_num().get_d() / q.get_den().get_d();
  return q.get_d();
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Unitary:
      return "Unitary";
    case Status::NotUnitary:
      return "NotUnitary";
    case Status::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(Witness w) {
  switch (w) {
    case Witness::VacuumTheorem:
      return "VacuumTheorem";
    case Witness::FirstKacDeterminant:
      return "FirstKacDeterminant";
    case Witness::ConstructiveFamily:
      return "ConstructiveFamily";
    case Witness::NecessaryConditionFailed:
      return "NecessaryConditionFailed";
    case Witness::OutOfClassifiedRegion:
      return "OutOfClassifiedRegion";
  }
  return "OutOfClassifiedRegion";
}

nlohmann::json to_json(const UnitarityVerdict& v) {
  nlohmann::json j{{"status", to_string(v.status)},
                   {"witness", to_string(v.witness)},
                   {"c", v.c},
                   {"h", v.h},
                   {"w", v.w},
                   {"f11MinusW2", v.f11_minus_w2},
                   {"exact", v.exact}};
  j["constructiveBound"] = v.constructive_bound ? nlohmann::json(*v.constructive_bound) : nlohmann::json(nullptr);
  j["discreteSeriesM"] = v.discrete_series_m ? nlohmann::json(*v.discrete_series_m) : nlohmann::json(nullptr);
  return j;
}

double first_kac_quantity(double c, double h, double w) {
  if (std::abs(5.0 * c + 22.0) < 1e-12) throw PoleAtForbiddenCentralCharge();
  return 2.0 * h * h * (96.0 * h - 3.0 * (c - 2.0)) / (27.0 * (5.0 * c + 22.0)) - w * w;
}

BigRational first_kac_quantity(const BigRational& c, const BigRational& h, const BigRational& w) {
  return f_mm_minus_w2(1, c, h, w);
}

namespace {

// Shared decision procedure; Scalar is double or BigRational.
template <typename Scalar>
UnitarityVerdict decide(const Scalar& c, const Scalar& h, const Scalar& w, bool exact) {
  UnitarityVerdict v;
  v.exact = exact;
  if constexpr (std::is_same_v<Scalar, double>) {
    v.c = c;
    v.h = h;
    v.w = w;
  } else {
    v.c = to_double(c);
    v.h = to_double(h);
    v.w = to_double(w);
  }
  const Scalar f = first_kac_quantity(c, h, w);
  if constexpr (std::is_same_v<Scalar, double>) {
    v.f11_minus_w2 = f + 0.0;
  } else {
    v.f11_minus_w2 = to_double(f) + 0.0;
  }

  const Scalar excess = 2 * h - (c - 2) / 12;  // >= 0 iff h >= (c-2)/24
  if (excess >= 0) {
    v.constructive_bound = std::sqrt(8.0 / (198.0 + 45.0 * v.c)) * std::pow(std::max(0.0, 2.0 * v.h - (v.c - 2.0) / 12.0), 1.5);
  }
  v.discrete_series_m = discrete_series_index(c);

  if (c < 2) {
    v.status = Status::Unknown;
    v.witness = Witness::OutOfClassifiedRegion;
    return v;
  }
  if (h == 0 && w == 0) {
    v.status = Status::Unitary;
    v.witness = Witness::VacuumTheorem;
    return v;
  }
  if (c <= 98) {
    const bool ok = f >= 0;
    v.status = ok ? Status::Unitary : Status::NotUnitary;
    v.witness = ok ? Witness::FirstKacDeterminant : Witness::NecessaryConditionFailed;
    return v;
  }
  if (f < 0) {
    v.status = Status::NotUnitary;
    v.witness = Witness::NecessaryConditionFailed;
    return v;
  }
  // w^2 <= 8/(198+45c) * excess^3, decided without square roots
  if (excess >= 0 && w * w * (198 + 45 * c) <= 8 * excess * excess * excess) {
    v.status = Status::Unitary;
    v.witness = Witness::ConstructiveFamily;
    return v;
  }
  v.status = Status::Unknown;
  v.witness = Witness::OutOfClassifiedRegion;
  return v;
}

}  // namespace

UnitarityVerdict classify(double c, double h, double w) {
  if (!std::isfinite(c) || !std::isfinite(h) || !std::isfinite(w)) {
    throw std::invalid_argument("classify needs finite c, h, w");
  }
  return decide<double>(c, h, w, false);
}

UnitarityVerdict classify(const BigRational& c, const BigRational& h, const BigRational& w) {
  if (5 * c + 22 == 0) throw PoleAtForbiddenCentralCharge();
  return decide<BigRational>(c, h, w, true);
}

RegionScan region_scan(double c, double h_min, double h_max, double w_min, double w_max, int resolution,
                       unsigned threads) {
  if (resolution < 2) throw std::invalid_argument("region scan resolution must be at least 2");
  if (std::abs(5.0 * c + 22.0) < 1e-12) throw PoleAtForbiddenCentralCharge();
  RegionScan scan;
  scan.c = c;
  const double dh = (h_max - h_min) / (resolution - 1);
  const double dw = (w_max - w_min) / (resolution - 1);
  scan.points.resize(static_cast<std::size_t>(resolution) * resolution);
  const auto row = [&](int i) {
    for (int j = 0; j < resolution; ++j) {
      scan.points[static_cast<std::size_t>(i) * resolution + j] = classify(c, h_min + i * dh, w_min + j * dw);
    }
  };
  if (threads <= 1) {
    for (int i = 0; i < resolution; ++i) row(i);
    return scan;
  }
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < resolution; i = next++) row(i);
      });
    }
  }
  return scan;
}

std::string csv_header() { return "c,h,w,status,witness,f11_minus_w2,constructive_bound"; }

std::string to_csv_row(const UnitarityVerdict& v) {
  std::ostringstream os;
  os << std::setprecision(17) << v.c << "," << v.h << "," << v.w << "," << to_string(v.status) << ","
     << to_string(v.witness) << "," << v.f11_minus_w2 << ",";
  if (v.constructive_bound) os << *v.constructive_bound;
  return os.str();
}

std::string to_csv(const RegionScan& scan) {
  std::ostringstream os;
  os << csv_header() << "\r\n";
  for (const auto& p : scan.points) os << to_csv_row(p) << "\r\n";
  return os.str();
}

}  // namespace w3lab
