// w3lab command-line tool.
//
// Exit codes: 0 ok, 1 invalid input, 2 pole at c = -22/5, 3 level above cap,
// 4 Kac ratio deviation, 5 residual or PSD failure, 6 Fock cutoff exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "w3lab/classify.hpp"
#include "w3lab/exact.hpp"
#include "w3lab/fock.hpp"
#include "w3lab/fock_checks.hpp"
#include "w3lab/gram_cache.hpp"
#include "w3lab/kac.hpp"
#include "w3lab/verma.hpp"

namespace {

using nlohmann::json;
using namespace w3lab;

enum ExitCode { kOk = 0, kInvalid = 1, kPole = 2, kLevelTooLarge = 3, kDeviation = 4, kCheckFailed = 5, kCutoff = 6 };

struct CliError : std::runtime_error {
  CliError(int code, std::string type, const std::string& message)
      : std::runtime_error(message), code(code), type(std::move(type)) {}
  int code;
  std::string type;
};

enum class OutputFormat { Json, Csv, Pretty };

struct RunConfig {
  std::optional<GramCache> cache;
  OutputFormat format = OutputFormat::Json;
  std::map<std::string, double> tolerances;

  void validate() const {
    for (const auto& [name, value] : tolerances) {
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw CliError(kInvalid, "InvalidInput", "tolerance " + name + " must be positive");
      }
    }
  }
  double tolerance(const std::string& name) const { return tolerances.at(name); }
};

void emit_error(int code, const std::string& type, const std::string& message) {
  std::cerr << json{{"error", type}, {"message", message}, {"exitCode", code}}.dump() << "\n";
}

void warn(const std::string& message, json detail = json::object()) {
  detail["warning"] = message;
  std::cerr << detail.dump() << "\n";
}

void emit(const json& payload, OutputFormat format) {
  if (format == OutputFormat::Csv) throw CliError(kInvalid, "InvalidInput", "this command has no csv output");
  std::cout << (format == OutputFormat::Pretty ? payload.dump(2) : payload.dump()) << "\n";
}

bool is_plain_rational(const std::string& text) {
  return text.find_first_of(".eE") == std::string::npos;
}

/// Integers and "p/q" only.
BigRational parse_exact(const std::string& name, const std::string& text) {
  if (!is_plain_rational(text)) {
    throw CliError(kInvalid, "InvalidInput", name + " must be an integer or p/q, got \"" + text + "\"");
  }
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw CliError(kInvalid, "InvalidInput", name + ": " + e.what());
  }
}

/// Also accepts decimals, converted exactly with a warning.
BigRational parse_lenient(const std::string& name, const std::string& text) {
  BigRational value;
  try {
    value = parse_rational(text);
  } catch (const std::exception& e) {
    throw CliError(kInvalid, "InvalidInput", name + ": " + e.what());
  }
  if (!is_plain_rational(text)) {
    warn("decimal input converted to an exact rational; points on a boundary may classify differently "
         "than the intended real number",
         {{"parameter", name}, {"value", text}, {"convertedTo", to_string(value)}});
  }
  return value;
}

void require_not_pole(const BigRational& c) {
  if (5 * c + 22 == 0) throw PoleAtForbiddenCentralCharge();
}

json point_json(const RationalPoint& p) {
  return {{"c", to_string(p.c)}, {"h", to_string(p.h)}, {"w", to_string(p.w)}};
}

// ---------------------------------------------------------------- gram

struct GramArgs {
  int level = 0;
  std::optional<std::string> c, h, w;
  bool symbolic = false;
  int level_cap = 6;
  unsigned threads = 1;
};

int run_gram(const GramArgs& args, const RunConfig& config) {
  const int given = static_cast<int>(args.c.has_value()) + args.h.has_value() + args.w.has_value();
  if (given != 0 && given != 3) throw CliError(kInvalid, "InvalidInput", "--c, --h and --w must be given together");
  std::optional<RationalPoint> point;
  if (given == 3) {
    point = RationalPoint{parse_exact("c", *args.c), parse_exact("h", *args.h), parse_exact("w", *args.w)};
    require_not_pole(point->c);
  }
  if (args.level < 0) throw CliError(kInvalid, "InvalidInput", "--level must be nonnegative");

  VermaEngine engine(EngineOptions{args.level_cap, args.threads});
  const GramMatrix gram = cached_gram_matrix(engine, args.level, config.cache ? &*config.cache : nullptr);

  if (args.symbolic || !point) {
    emit(to_json(gram), config.format);
    return kOk;
  }
  const auto values = gram.evaluate(point->c, point->h, point->w);
  json basis = json::array();
  for (const auto& word : gram.basis) basis.push_back(word.to_string());
  json rows = json::array();
  for (const auto& row : values) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    rows.push_back(std::move(r));
  }
  emit({{"level", gram.level},
        {"basis", std::move(basis)},
        {"point", point_json(*point)},
        {"entries", std::move(rows)},
        {"determinant", to_string(bareiss_determinant(values))}},
       config.format);
  return kOk;
}

// ---------------------------------------------------------------- kac-verify

struct KacVerifyArgs {
  int level = 1;
  std::optional<std::string> samples;
  std::optional<std::size_t> random;
  std::uint64_t seed = 1;
  int level_cap = 6;
  unsigned threads = 1;
};

std::vector<RationalPoint> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kInvalid, "InvalidInput", "cannot read samples file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw CliError(kInvalid, "InvalidInput", std::string("samples file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw CliError(kInvalid, "InvalidInput", "samples file must hold an array of points");
  const auto field = [](const json& v, const std::string& name) {
    if (v.is_string()) return parse_exact(name, v.get<std::string>());
    if (v.is_number_integer()) return BigRational(v.get<long>());
    throw CliError(kInvalid, "InvalidInput", "sample coordinate " + name + " must be a string p/q or an integer");
  };
  std::vector<RationalPoint> points;
  for (const auto& p : j) {
    if (p.is_array() && p.size() == 3) {
      points.push_back({field(p[0], "c"), field(p[1], "h"), field(p[2], "w")});
    } else if (p.is_object() && p.contains("c") && p.contains("h") && p.contains("w")) {
      points.push_back({field(p["c"], "c"), field(p["h"], "h"), field(p["w"], "w")});
    } else {
      throw CliError(kInvalid, "InvalidInput", "each sample must be [c, h, w] or {\"c\", \"h\", \"w\"}");
    }
    require_not_pole(points.back().c);
  }
  return points;
}

int run_kac_verify(const KacVerifyArgs& args, const RunConfig& config) {
  if (args.samples && args.random) throw CliError(kInvalid, "InvalidInput", "--samples and --random are exclusive");
  if (args.level < 1) throw CliError(kInvalid, "InvalidInput", "--level must be at least 1");
  std::vector<RationalPoint> points;
  if (args.samples) {
    points = read_samples(*args.samples);
  } else {
    std::mt19937_64 rng(args.seed);
    points = random_points_in_region_h(args.random.value_or(5), rng);
  }
  if (points.size() < 2) throw CliError(kInvalid, "InvalidInput", "at least two sample points are needed");

  VermaEngine engine(EngineOptions{args.level_cap, args.threads});
  const GramMatrix gram = cached_gram_matrix(engine, args.level, config.cache ? &*config.cache : nullptr);
  ComparisonReport report;
  try {
    report = compare_with_gram(gram, points, config.tolerance("ratio"));
  } catch (const DegenerateSample& e) {
    throw CliError(kInvalid, "DegenerateSample", e.what());
  }
  emit(to_json(report), config.format);
  return report.agrees ? kOk : kDeviation;
}

// ---------------------------------------------------------------- classify / region

struct ClassifyArgs {
  std::string c, h, w;
};

int run_classify(const ClassifyArgs& args, const RunConfig& config) {
  const BigRational c = parse_lenient("c", args.c);
  const BigRational h = parse_lenient("h", args.h);
  const BigRational w = parse_lenient("w", args.w);
  json payload = to_json(classify(c, h, w));
  payload["input"] = {{"c", to_string(c)}, {"h", to_string(h)}, {"w", to_string(w)}};
  emit(payload, config.format);
  return kOk;
}

struct RegionArgs {
  std::string c;
  double h_min = 0.0;
  double h_max = 1.0;
  std::optional<double> w_min;
  double w_max = 1.0;
  int resolution = 101;
  unsigned threads = 1;
};

int run_region(const RegionArgs& args, const RunConfig& config) {
  const BigRational c = parse_lenient("c", args.c);
  require_not_pole(c);
  const double w_min = args.w_min.value_or(-args.w_max);
  if (!(args.h_max > args.h_min) || !(args.w_max > w_min)) {
    throw CliError(kInvalid, "InvalidInput", "region ranges must be nonempty");
  }
  if (args.resolution < 2) throw CliError(kInvalid, "InvalidInput", "--res must be at least 2");
  const RegionScan scan = region_scan(c.get_d(), args.h_min, args.h_max, w_min, args.w_max, args.resolution,
                                      args.threads);
  if (config.format == OutputFormat::Csv) {
    std::cout << to_csv(scan);
    return kOk;
  }
  json points = json::array();
  for (const auto& p : scan.points) points.push_back(to_json(p));
  emit({{"c", scan.c}, {"resolution", args.resolution}, {"points", std::move(points)}}, config.format);
  return kOk;
}

// ---------------------------------------------------------------- fz-check

struct FzCheckArgs {
  std::string variant = "vacuumModified";
  double kappa = 1.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double eta_re = 0.0;
  double eta_im = 0.0;
  int cutoff = 8;
  int max_mode = 2;
  int max_level = 2;
  int rho_order = 20;
  int b_sign = 1;
};

int run_fz_check(const FzCheckArgs& args, const RunConfig& config) {
  Variant variant;
  try {
    variant = parse_variant(args.variant);
  } catch (const std::exception& e) {
    throw CliError(kInvalid, "InvalidInput", e.what());
  }
  if (args.max_mode < 0 || args.max_level < 0 || args.rho_order < 0) {
    throw CliError(kInvalid, "InvalidInput", "--max-mode, --max-level and --rho-order must be nonnegative");
  }
  if (args.b_sign != 1 && args.b_sign != -1) throw CliError(kInvalid, "InvalidInput", "--b-sign must be 1 or -1");
  if (args.max_level + 2 * args.max_mode > args.cutoff) {
    throw CliError(kCutoff, "CutoffExceeded",
                   "max-level + 2 max-mode = " + std::to_string(args.max_level + 2 * args.max_mode) +
                       " exceeds the cutoff " + std::to_string(args.cutoff));
  }
  RealizationParams params;
  params.kappa = args.kappa;
  params.q1 = args.q1;
  params.q2 = args.q2;
  params.eta = Complex(args.eta_re, args.eta_im);
  params.cutoff = args.cutoff;
  params.b_sign = args.b_sign;

  json checks = json::array();
  bool passed = true;
  const auto record = [&](const ResidualReport& r) {
    passed = passed && r.passed();
    checks.push_back(to_json(r));
  };
  record(check_w3_relations(variant, params, args.max_mode, args.max_level, config.tolerance("relations")));
  record(check_automorphism_identity(args.kappa, params.eta, params, args.max_mode, args.max_level,
                                     config.tolerance("automorphism")));
  const WeakSymmetryReport weak = check_weak_symmetry(params, args.max_mode, args.max_level, config.tolerance("weak"));
  record(weak.pairs);
  record(weak.triples);
  record(weak.control);

  const RhoOdeReport rho = verify_rho_ode(args.rho_order);
  passed = passed && rho.exact_zero();

  RealizationParams vac = params;
  vac.q1 = 0.0;
  vac.q2 = 0.0;
  const ZeroVectorReport zero = zero_vectors(Variant::VacuumModified, vac);
  const bool zero_ok = zero.max() < config.tolerance("zeroVector");
  passed = passed && zero_ok;

  emit({{"variant", to_string(variant)},
        {"params", to_json(params)},
        {"maxModeIndex", args.max_mode},
        {"maxLevel", args.max_level},
        {"checks", std::move(checks)},
        {"rhoOde", to_json(rho)},
        {"zeroVectors",
         {{"realization", "vacuumModified"},
          {"q1", 0.0},
          {"q2", 0.0},
          {"Lminus1", zero.l_minus1},
          {"Wminus1", zero.w_minus1},
          {"Wminus2", zero.w_minus2},
          {"tolerance", config.tolerance("zeroVector")},
          {"passed", zero_ok}}},
        {"passed", passed}},
       config.format);
  return passed ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- vacuum-spectrum

struct VacuumSpectrumArgs {
  double kappa = 0.0;
  int level = 2;
  std::optional<int> cutoff;
};

int run_vacuum_spectrum(const VacuumSpectrumArgs& args, const RunConfig& config) {
  const int cutoff = args.cutoff.value_or(args.level + 2);
  if (args.level < 0) throw CliError(kInvalid, "InvalidInput", "--level must be nonnegative");
  if (args.level > cutoff - 2) throw CliError(kInvalid, "InvalidInput", "--level must be at most cutoff - 2");
  RealizationParams params;
  params.kappa = args.kappa;
  params.cutoff = cutoff;
  const CyclicGram gram = cyclic_gram(Variant::VacuumModified, params, args.level);
  const double tol = config.tolerance("psd");
  const bool passed = gram.min_eigenvalue() >= -tol;
  emit({{"kappa", args.kappa},
        {"c", params.c()},
        {"level", args.level},
        {"cutoff", cutoff},
        {"dimension", gram.words.size()},
        {"eigenvalues", gram.eigenvalues},
        {"minEigenvalue", gram.min_eigenvalue()},
        {"psdTolerance", tol},
        {"passed", passed}},
       config.format);
  return passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lowest-weight representations of the W3 algebra: Gram matrices, Kac determinant, "
               "free-field realization and unitarity."};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  std::string format = "json";
  std::map<std::string, double> tolerances{{"ratio", 1e-8},      {"relations", 1e-9}, {"automorphism", 1e-10},
                                           {"weak", 1e-9},       {"psd", 1e-8},       {"zeroVector", 1e-12}};
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "pretty", "csv"}));
  bool no_cache = false;
  app.add_flag("--no-cache", no_cache, "Ignore W3LAB_CACHE_DIR");

  GramArgs gram;
  auto* gram_cmd = app.add_subcommand("gram", "Gram matrix of the Verma module at one level");
  gram_cmd->add_option("--level", gram.level, "Level N")->required();
  gram_cmd->add_option("--c", gram.c, "Central charge (p/q)");
  gram_cmd->add_option("--h", gram.h, "L0 weight (p/q)");
  gram_cmd->add_option("--w", gram.w, "W0 weight (p/q)");
  gram_cmd->add_flag("--symbolic", gram.symbolic, "Print polynomial entries");
  gram_cmd->add_option("--level-cap", gram.level_cap, "Largest level accepted");
  gram_cmd->add_option("--threads", gram.threads, "Worker threads");

  KacVerifyArgs kac;
  auto* kac_cmd = app.add_subcommand("kac-verify", "Compare det Gram_N with the closed-form Kac determinant");
  kac_cmd->add_option("--level", kac.level, "Level N")->required();
  auto* samples_opt = kac_cmd->add_option("--samples", kac.samples, "JSON file of [c, h, w] rational strings");
  auto* random_opt = kac_cmd->add_option("--random", kac.random, "Number of random points in 2 < c < 98");
  samples_opt->excludes(random_opt);
  kac_cmd->add_option("--seed", kac.seed, "Seed for --random");
  kac_cmd->add_option("--tolerance", tolerances["ratio"], "Relative tolerance on the ratios");
  kac_cmd->add_option("--level-cap", kac.level_cap, "Largest level accepted");
  kac_cmd->add_option("--threads", kac.threads, "Worker threads");

  ClassifyArgs cls;
  auto* classify_cmd = app.add_subcommand("classify", "Unitarity verdict at (c, h, w)");
  classify_cmd->add_option("--c", cls.c, "Central charge")->required();
  classify_cmd->add_option("--h", cls.h, "L0 weight")->required();
  classify_cmd->add_option("--w", cls.w, "W0 weight")->required();

  RegionArgs region;
  auto* region_cmd = app.add_subcommand("region", "Unitarity verdicts on an (h, w) grid, as CSV");
  region_cmd->add_option("--c", region.c, "Central charge")->required();
  region_cmd->add_option("--h-min", region.h_min, "Smallest h");
  region_cmd->add_option("--h-max", region.h_max, "Largest h")->required();
  region_cmd->add_option("--w-min", region.w_min, "Smallest w (default -w-max)");
  region_cmd->add_option("--w-max", region.w_max, "Largest w")->required();
  region_cmd->add_option("--res", region.resolution, "Points per axis");
  region_cmd->add_option("--threads", region.threads, "Worker threads");

  FzCheckArgs fz;
  auto* fz_cmd = app.add_subcommand("fz-check", "Residual checks on the free-field realization");
  fz_cmd->add_option("--variant", fz.variant, "raw, vacuumModified or unitaryFamily");
  fz_cmd->add_option("--kappa", fz.kappa, "Background charge kappa");
  fz_cmd->add_option("--q1", fz.q1, "Charge of current 1");
  fz_cmd->add_option("--q2", fz.q2, "Charge of current 2");
  fz_cmd->add_option("--eta-re", fz.eta_re, "Real part of eta");
  fz_cmd->add_option("--eta-im", fz.eta_im, "Imaginary part of eta");
  fz_cmd->add_option("--cutoff", fz.cutoff, "Fock level cutoff");
  fz_cmd->add_option("--max-mode", fz.max_mode, "Largest |mode index|");
  fz_cmd->add_option("--max-level", fz.max_level, "Largest level of test states");
  fz_cmd->add_option("--rho-order", fz.rho_order, "Order of the rho ODE check");
  fz_cmd->add_option("--b-sign", fz.b_sign, "Sign of b");
  fz_cmd->add_option("--tolerance", tolerances["relations"], "Tolerance on relation residuals");

  VacuumSpectrumArgs vac;
  auto* vac_cmd = app.add_subcommand("vacuum-spectrum", "Eigenvalues of the vacuum cyclic Gram matrix");
  vac_cmd->add_option("--kappa", vac.kappa, "Background charge kappa");
  vac_cmd->add_option("--level", vac.level, "Largest word level N");
  vac_cmd->add_option("--cutoff", vac.cutoff, "Fock level cutoff (default N + 2)");
  vac_cmd->add_option("--psd-tolerance", tolerances["psd"], "Allowed negative eigenvalue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(kInvalid, "InvalidInput", e.what());
    return kInvalid;
  }

  try {
    RunConfig config;
    config.tolerances = tolerances;
    config.validate();
    config.format = format == "pretty" ? OutputFormat::Pretty : format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (!no_cache) config.cache = GramCache::from_environment();

    if (*gram_cmd) return run_gram(gram, config);
    if (*kac_cmd) return run_kac_verify(kac, config);
    if (*classify_cmd) return run_classify(cls, config);
    if (*region_cmd) {
      if (app.get_option("--format")->count() == 0) config.format = OutputFormat::Csv;
      return run_region(region, config);
    }
    if (*fz_cmd) return run_fz_check(fz, config);
    if (*vac_cmd) return run_vacuum_spectrum(vac, config);
  } catch (const CliError& e) {
    emit_error(e.code, e.type, e.what());
    return e.code;
  } catch (const PoleAtForbiddenCentralCharge& e) {
    emit_error(kPole, "PoleAtForbiddenCentralCharge", e.what());
    return kPole;
  } catch (const LevelTooLarge& e) {
    emit_error(kLevelTooLarge, "LevelTooLarge", e.what());
    return kLevelTooLarge;
  } catch (const CutoffExceeded& e) {
    emit_error(kCutoff, "CutoffExceeded", e.what());
    return kCutoff;
  } catch (const ParseError& e) {
    emit_error(kInvalid, "InvalidInput", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    emit_error(kInvalid, "Error", e.what());
    return kInvalid;
  }
  return kInvalid;
}
