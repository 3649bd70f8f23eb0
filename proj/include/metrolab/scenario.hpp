#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace metrolab {

enum class Scenario { NoonScaling, CatVsNoon, CvConvergence, ZetaOptimize, LossySweep, VarianceOracle };

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();
// One line per scenario: name and a short description of its CSV columns.
std::string describe_scenarios();

struct ScenarioConfig {
  Scenario scenario = Scenario::NoonScaling;
  nlohmann::json params = nlohmann::json::object();  // validated, defaults filled in
  std::string output_path;
  std::uint64_t seed = 12345;
};

struct ConfigIssue {
  std::string field;  // dotted path, empty for syntax errors
  std::string message;
  std::size_t line = 0;  // 1-based, syntax errors only
  std::size_t column = 0;
};

std::string format_issue(const ConfigIssue& issue);

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
};

struct ValidationResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigIssue> issues;  // every problem found, not just the first
  bool ok() const { return config.has_value(); }
};

// Parses a JSON config document:
//   {"scenario": "<name>", "output": "<path>", "seed": <u64>, "params": {...}}
// Overrides replace the corresponding document fields before validation.
ValidationResult validate_config(std::string_view raw, const ConfigOverrides& overrides = {});

// CSV text for a validated config. Deterministic for a fixed config and seed.
// `summary` receives a human-readable line for the terminal when non-null.
std::string render_scenario(const ScenarioConfig& config, std::string* summary = nullptr);

// Renders the scenario and writes config.output_path. Returns 0 on success,
// 1 on computation failure, 2 when the output cannot be written; diagnostics
// go to `log`.
int run_scenario(const ScenarioConfig& config, std::ostream& log);

}  // namespace metrolab
