#include "metrolab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "metrolab/error.hpp"
#include "metrolab/metrology.hpp"
#include "metrolab/optimizer.hpp"
#include "metrolab/probes.hpp"

namespace metrolab {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

// ----------------------------------------------------------- param schema

enum class Kind { Int, Number, IntArray, NumberArray, Choice };

struct ParamSpec {
  const char* name;
  Kind kind;
  json fallback;  // null: required unless `optional`
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> choices = {};
  bool optional = false;
};

const std::vector<ParamSpec>& schema(Scenario s) {
  static const std::vector<ParamSpec> noon_scaling = {
      {"n_min", Kind::Int, 1, 1, 60},
      {"n_max", Kind::Int, 10, 1, 60},
  };
  static const std::vector<ParamSpec> cat_vs_noon = {
      {"alphas", Kind::NumberArray, nullptr, 0.0, 7.0},
      {"n_total", Kind::Int, 60, 1, 60},
  };
  static const std::vector<ParamSpec> cv_convergence = {
      {"alpha", Kind::Number, 1.0, 0.0, 5.0},
      {"n_values", Kind::IntArray, json::array({10, 40, 160}), 1, 1000},
  };
  static const std::vector<ParamSpec> zeta_optimize = {
      {"probe", Kind::Choice, "correlated", 0, 0, {"correlated", "anti-correlated"}},
      {"n_total", Kind::Int, 8, 1, 60},
      {"coeffs", Kind::NumberArray, nullptr, -1e6, 1e6, {}, true},
      {"grid_points", Kind::Int, 181, 1, 100000},
  };
  static const std::vector<ParamSpec> lossy_sweep = {
      {"probe", Kind::Choice, "noon", 0, 0, {"noon", "correlated"}},
      {"n_total", Kind::Int, 4, 1, 60},
      {"mode", Kind::Int, 0, 0, 2},
      {"kappa_max", Kind::Number, kPi / 2, 0.0, 2 * kPi},
      {"points", Kind::Int, 9, 2, 1000},
  };
  static const std::vector<ParamSpec> variance_oracle = {
      {"count", Kind::Int, 200, 1, 100000},
      {"n_max", Kind::Int, 30, 1, 60},
  };
  switch (s) {
    case Scenario::NoonScaling: return noon_scaling;
    case Scenario::CatVsNoon: return cat_vs_noon;
    case Scenario::CvConvergence: return cv_convergence;
    case Scenario::ZetaOptimize: return zeta_optimize;
    case Scenario::LossySweep: return lossy_sweep;
    case Scenario::VarianceOracle: return variance_oracle;
  }
  throw std::logic_error("unknown scenario");
}

bool is_integer(const json& v) {
  if (v.is_number_integer()) return true;
  return v.is_number_float() && std::isfinite(v.get<double>()) && std::floor(v.get<double>()) == v.get<double>();
}

std::string range_text(const ParamSpec& p) {
  std::ostringstream os;
  os << "[" << p.lo << ", " << p.hi << "]";
  return os.str();
}

void check_scalar(const ParamSpec& p, const json& v, const std::string& field, std::vector<ConfigIssue>& issues) {
  const bool want_int = p.kind == Kind::Int || p.kind == Kind::IntArray;
  if (!v.is_number() || (want_int && !is_integer(v))) {
    issues.push_back({field, want_int ? "must be an integer" : "must be a number"});
    return;
  }
  const double x = v.get<double>();
  if (!(x >= p.lo && x <= p.hi)) issues.push_back({field, "must lie in " + range_text(p)});
}

void check_param(const ParamSpec& p, const json& v, std::vector<ConfigIssue>& issues) {
  const std::string field = std::string("params.") + p.name;
  switch (p.kind) {
    case Kind::Int:
    case Kind::Number:
      check_scalar(p, v, field, issues);
      break;
    case Kind::IntArray:
    case Kind::NumberArray:
      if (!v.is_array() || v.empty()) {
        issues.push_back({field, "must be a non-empty array"});
        return;
      }
      for (std::size_t k = 0; k < v.size(); ++k) check_scalar(p, v[k], field + "[" + std::to_string(k) + "]", issues);
      break;
    case Kind::Choice: {
      std::string options;
      for (const auto& c : p.choices) options += (options.empty() ? "" : ", ") + c;
      if (!v.is_string() || std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
        issues.push_back({field, "must be one of: " + options});
      }
      break;
    }
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view raw, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < raw.size() && k + 1 < byte; ++k) {
    if (raw[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void cross_checks(Scenario s, const json& p, std::vector<ConfigIssue>& issues) {
  auto num = [&](const char* k) { return p.at(k).get<double>(); };
  switch (s) {
    case Scenario::NoonScaling:
      if (num("n_min") > num("n_max")) issues.push_back({"params.n_min", "must not exceed params.n_max"});
      break;
    case Scenario::CatVsNoon:
      for (const auto& a : p.at("alphas")) {
        if (a.get<double>() * a.get<double>() > num("n_total")) {
          issues.push_back({"params.alphas", "every alpha^2 must be <= params.n_total"});
          break;
        }
      }
      break;
    case Scenario::CvConvergence:
      for (const auto& n : p.at("n_values")) {
        if (num("alpha") * num("alpha") > n.get<double>()) {
          issues.push_back({"params.n_values", "every N must be >= alpha^2"});
          break;
        }
      }
      break;
    case Scenario::ZetaOptimize:
      if (p.contains("coeffs")) {
        const auto n = static_cast<std::size_t>(num("n_total"));
        const std::size_t want = p.at("probe") == "correlated" ? n / 2 + 1 : n + 1;
        if (p.at("coeffs").size() != want) {
          issues.push_back({"params.coeffs", "needs " + std::to_string(want) + " entries for this probe and n_total"});
        }
      }
      break;
    case Scenario::LossySweep: {
      const auto n = static_cast<std::uint64_t>(num("n_total"));
      if (binomial(n + 3, 3) > max_dense_dim()) {
        issues.push_back({"params.n_total", "reduced 3-mode dimension exceeds the dense cap " + std::to_string(max_dense_dim())});
      }
      break;
    }
    case Scenario::VarianceOracle:
      break;
  }
}

// ------------------------------------------------------------- formatting

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> columns) {
    out_ << "# schema=1\n";
    bool first = true;
    for (const char* c : columns) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double x) { return num(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::uint32_t x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  std::ostringstream out_;
};

// Portable uniform draws; std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  Vector complex_gaussian(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& c : v) c = Complex(normal(), normal());
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

Vector to_vector(const json& arr) {
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) v[static_cast<Eigen::Index>(k)] = arr[k].get<double>();
  return v;
}

// --------------------------------------------------------------- scenarios

std::string noon_scaling(const json& p, std::string& summary) {
  Csv csv{"N", "qfi", "qfi_over_n2"};
  const auto lo = p.at("n_min").get<std::uint32_t>();
  const auto hi = p.at("n_max").get<std::uint32_t>();
  double worst = 0.0;
  for (std::uint32_t n = lo; n <= hi; ++n) {
    const PureState state = noon(n);
    const double q = qfi_pure(state, schwinger_J(state.basis(), PairAxis::z(0, 1))).qfi;
    csv.row(n, q, q / (static_cast<double>(n) * n));
    worst = std::max(worst, std::abs(q - static_cast<double>(n) * n));
  }
  summary = "noon-scaling: max |qfi - N^2| = " + num(worst);
  return csv.str();
}

std::string cat_vs_noon(const json& p, std::string& summary) {
  Csv csv{"alpha", "nbar", "qfi_cv_cat", "qfi_ssrc_cat", "qfi_coherent", "qfi_noon"};
  const auto n = p.at("n_total").get<std::uint32_t>();
  const PureState noon_state = noon(n);
  const double q_noon = qfi_pure(noon_state, schwinger_J(noon_state.basis(), PairAxis::z(0, 1))).qfi;
  for (const auto& a : p.at("alphas")) {
    const double alpha = a.get<double>();
    const std::uint32_t cutoff = std::max<std::uint32_t>(coherent_cutoff(alpha) + 2, 4);
    const PureState cat = cv_cat(alpha, cutoff);
    const PureState coh = coherent_truncated(alpha, cutoff);
    const HermitianOp n_single = number_op(cat.basis(), 0);
    const PureState ssrc = cat_ssrc(n, theta_for_amplitude(alpha, n), 0.0);
    const double q_ssrc = qfi_pure(ssrc, schwinger_J(ssrc.basis(), PairAxis::z(0, 1))).qfi;
    csv.row(alpha, expectation(cat, n_single), qfi_pure(cat, n_single).qfi, q_ssrc, qfi_pure(coh, n_single).qfi, q_noon);
  }
  summary = "cat-vs-noon: " + std::to_string(p.at("alphas").size()) + " amplitudes, NOON reference N = " + std::to_string(n);
  return csv.str();
}

std::string cv_convergence(const json& p, std::string& summary) {
  Csv csv{"N", "theta", "one_minus_fidelity", "var_jy_over_n", "var_p"};
  const double alpha = p.at("alpha").get<double>();
  double last = 0.0;
  for (const auto& nv : p.at("n_values")) {
    const auto n = nv.get<std::uint32_t>();
    const double theta = theta_for_amplitude(alpha, n);
    const PureState rotated = rotated_fock(n, theta, 0.0);
    const std::uint32_t cutoff = std::max(n, coherent_cutoff(alpha));
    const PureState image = cv_image(rotated, cutoff);
    last = 1.0 - fidelity(image, coherent_truncated(alpha, cutoff));
    const CoeffProfile coeffs(cv_image(rotated).amplitudes());
    const double var_jy = cv_variance_Jy(coeffs, n) / n;
    const double var_p = variance(image, quadrature_p(image.basis(), 0));
    csv.row(n, theta, last, var_jy, var_p);
  }
  summary = "cv-convergence: final 1 - fidelity = " + num(last);
  return csv.str();
}

std::string zeta_optimize(const json& p, std::uint64_t seed, std::string& summary) {
  const auto n = p.at("n_total").get<std::uint32_t>();
  const bool correlated = p.at("probe") == "correlated";
  Rng rng(seed);
  const std::size_t len = correlated ? n / 2 + 1 : n + 1;
  const Vector raw = p.contains("coeffs") ? to_vector(p.at("coeffs")) : rng.complex_gaussian(len);
  const CoeffProfile coeffs = CoeffProfile::normalized(raw);
  const PureState state = correlated ? correlated_three_mode(coeffs, n) : two_mode_ssrc(coeffs, n);

  const ZetaResult best = optimal_zeta(state);
  const auto points = p.at("grid_points").get<std::size_t>();
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = kPi * static_cast<double>(k) / static_cast<double>(points);

  Csv csv{"zeta", "qfi", "var_zeta", "var_perp", "is_optimum"};
  csv.row(best.zeta_opt, 4.0 * best.var_max, best.var_max, best.var_perp, 1);
  for (const ZetaSample& s : sweep_qfi_vs_zeta(state, grid)) csv.row(s.zeta, s.qfi, s.var_zeta, s.var_perp, 0);
  summary = "zeta_opt = " + num(best.zeta_opt) + " var_max = " + num(best.var_max) + " var_perp = " +
            num(best.var_perp) + (best.degenerate ? " (degenerate)" : "");
  return csv.str();
}

std::string lossy_sweep(const json& p, std::string& summary) {
  const auto n = p.at("n_total").get<std::uint32_t>();
  const bool use_noon = p.at("probe") == "noon";
  Matrix c = Matrix::Zero(n + 1, n + 1);
  if (use_noon) {
    c(0, 0) = c(n, 0) = 1.0;  // |N,0,0,0> + |0,0,N,0>
  } else {
    for (std::uint32_t k = 0; 2 * k <= n; ++k) c(k, k) = 1.0;
  }
  const PureState probe = general_probe(TwoIndexCoeffs::normalized(n, c), {});
  const FockBasis reduced(3, static_cast<int>(n));
  const HermitianOp generator = use_noon ? schwinger_J(reduced, PairAxis::z(0, 2)) : weighted_number(reduced, kPi / 4).first;

  const auto mode = p.at("mode").get<std::size_t>();
  const auto points = p.at("points").get<std::size_t>();
  const double kappa_max = p.at("kappa_max").get<double>();
  Csv csv{"kappa", "qfi", "purity"};
  double first = 0.0, last = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double kappa = kappa_max * static_cast<double>(k) / static_cast<double>(points - 1);
    const MixedState rho = lossy_probe(probe, mode, kappa);
    const double q = qfi_mixed(rho, generator).qfi;
    if (k == 0) first = q;
    last = q;
    csv.row(kappa, q, rho.purity());
  }
  summary = "lossy-sweep: qfi " + num(first) + " -> " + num(last);
  return csv.str();
}

std::string variance_oracle(const json& p, std::uint64_t seed, std::string& summary) {
  const auto count = p.at("count").get<std::size_t>();
  const auto n_max = p.at("n_max").get<std::uint32_t>();
  Rng rng(seed);
  Csv csv{"index", "N", "beta", "phi", "analytic", "matrix", "abs_diff"};
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto n = 1 + static_cast<std::uint32_t>(rng.uniform() * n_max) % n_max;
    const double beta = rng.uniform(0.0, kPi);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const CoeffProfile coeffs = CoeffProfile::normalized(rng.complex_gaussian(n + 1));
    const double analytic = analytic_variance_Jn(coeffs, n, beta, phi);
    const PureState state = two_mode_ssrc(coeffs, n);
    const double matrix = variance(state, schwinger_J(state.basis(), PairAxis(0, 1, beta, phi)));
    worst = std::max(worst, std::abs(analytic - matrix));
    csv.row(k, n, beta, phi, analytic, matrix, std::abs(analytic - matrix));
  }
  summary = "variance-oracle: max |analytic - matrix| = " + num(worst);
  return csv.str();
}

}  // namespace

// ---------------------------------------------------------------- public API

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::NoonScaling: return "noon-scaling";
    case Scenario::CatVsNoon: return "cat-vs-noon";
    case Scenario::CvConvergence: return "cv-convergence";
    case Scenario::ZetaOptimize: return "zeta-optimize";
    case Scenario::LossySweep: return "lossy-sweep";
    case Scenario::VarianceOracle: return "variance-oracle";
  }
  return "?";
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> v = {Scenario::NoonScaling,  Scenario::CatVsNoon,  Scenario::CvConvergence,
                                          Scenario::ZetaOptimize, Scenario::LossySweep, Scenario::VarianceOracle};
  return v;
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : all_scenarios()) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string describe_scenarios() {
  return "noon-scaling     N,qfi,qfi_over_n2              NOON QFI under J_z\n"
         "cat-vs-noon      alpha,nbar,qfi_cv_cat,...      cat / coherent / NOON QFI comparison\n"
         "cv-convergence   N,theta,one_minus_fidelity,... rotated Fock -> coherent state\n"
         "zeta-optimize    zeta,qfi,var_zeta,var_perp,... optimal generator weighting\n"
         "lossy-sweep      kappa,qfi,purity               QFI under environment coupling\n"
         "variance-oracle  index,N,beta,phi,analytic,...  closed-form vs matrix Var(J_n)\n";
}

std::string format_issue(const ConfigIssue& issue) {
  std::ostringstream os;
  if (issue.line > 0) {
    os << "config:" << issue.line << ":" << issue.column << ": syntax error: " << issue.message;
  } else {
    os << issue.field << ": " << issue.message;
  }
  return os.str();
}

ValidationResult validate_config(std::string_view raw, const ConfigOverrides& overrides) {
  ValidationResult result;
  json doc;
  try {
    doc = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(raw, e.byte);
    result.issues.push_back({"", e.what(), line, col});
    return result;
  }
  if (!doc.is_object()) {
    result.issues.push_back({"(root)", "config must be a JSON object"});
    return result;
  }

  ScenarioConfig config;
  std::optional<Scenario> scenario;
  if (!doc.contains("scenario")) {
    result.issues.push_back({"scenario", "missing"});
  } else if (!doc["scenario"].is_string() || !(scenario = parse_scenario(doc["scenario"].get<std::string>()))) {
    std::string valid;
    for (Scenario s : all_scenarios()) valid += (valid.empty() ? "" : ", ") + std::string(scenario_name(s));
    result.issues.push_back({"scenario", "unknown scenario; valid scenarios: " + valid});
  }

  for (const auto& [key, value] : doc.items()) {
    if (key != "scenario" && key != "output" && key != "seed" && key != "params") {
      result.issues.push_back({key, "unknown top-level field"});
    }
  }

  if (overrides.output_path) {
    config.output_path = *overrides.output_path;
  } else if (doc.contains("output")) {
    if (doc["output"].is_string() && !doc["output"].get<std::string>().empty()) {
      config.output_path = doc["output"].get<std::string>();
    } else {
      result.issues.push_back({"output", "must be a non-empty string"});
    }
  } else if (scenario) {
    config.output_path = std::string(scenario_name(*scenario)) + ".csv";
  }

  if (overrides.seed) {
    config.seed = *overrides.seed;
  } else if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned()) {
      config.seed = doc["seed"].get<std::uint64_t>();
    } else {
      result.issues.push_back({"seed", "must be a non-negative integer"});
    }
  }

  json params = doc.contains("params") ? doc["params"] : json::object();
  if (!params.is_object()) {
    result.issues.push_back({"params", "must be an object"});
    params = json::object();
  }

  if (scenario) {
    const auto& specs = schema(*scenario);
    for (const auto& [key, value] : params.items()) {
      const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& p) { return key == p.name; });
      if (!known) result.issues.push_back({"params." + key, "unknown parameter for this scenario"});
    }
    const std::size_t before = result.issues.size();
    for (const ParamSpec& p : specs) {
      if (!params.contains(p.name)) {
        if (!p.fallback.is_null()) {
          params[p.name] = p.fallback;
        } else if (!p.optional) {
          result.issues.push_back({std::string("params.") + p.name, "required"});
        }
        continue;
      }
      check_param(p, params[p.name], result.issues);
    }
    if (result.issues.size() == before) cross_checks(*scenario, params, result.issues);
    config.scenario = *scenario;
  }

  if (result.issues.empty()) {
    config.params = std::move(params);
    result.config = std::move(config);
  }
  return result;
}

std::string render_scenario(const ScenarioConfig& config, std::string* summary) {
  std::string line;
  std::string csv;
  const json& p = config.params;
  switch (config.scenario) {
    case Scenario::NoonScaling: csv = noon_scaling(p, line); break;
    case Scenario::CatVsNoon: csv = cat_vs_noon(p, line); break;
    case Scenario::CvConvergence: csv = cv_convergence(p, line); break;
    case Scenario::ZetaOptimize: csv = zeta_optimize(p, config.seed, line); break;
    case Scenario::LossySweep: csv = lossy_sweep(p, line); break;
    case Scenario::VarianceOracle: csv = variance_oracle(p, config.seed, line); break;
  }
  if (summary) *summary = line;
  return csv;
}

int run_scenario(const ScenarioConfig& config, std::ostream& log) {
  std::string csv;
  std::string summary;
  try {
    csv = render_scenario(config, &summary);
  } catch (const std::exception& e) {
    log << "error: scenario " << scenario_name(config.scenario) << " failed: " << e.what() << '\n';
    return 1;
  }
  std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << csv) || !out.flush()) {
    log << "error: cannot write output file '" << config.output_path << "'\n";
    return 2;
  }
  log << summary << '\n' << "wrote " << config.output_path << '\n';
  return 0;
}

}  // namespace metrolab
