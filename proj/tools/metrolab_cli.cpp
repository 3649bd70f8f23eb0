// Command-line front end: run named scenarios from a JSON config.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "metrolab/scenario.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int load(const std::string& path, const metrolab::ConfigOverrides& overrides, metrolab::ValidationResult& result) {
  std::string raw;
  if (!read_file(path, raw)) {
    std::cerr << "error: cannot read config '" << path << "'\n";
    return 2;
  }
  result = metrolab::validate_config(raw, overrides);
  for (const auto& issue : result.issues) std::cerr << "error: " << metrolab::format_issue(issue) << '\n';
  return result.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonic metrology scenarios: Fock-space QFI, CV limits, generator optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write its CSV");
  run->add_option("--config", config_path, "JSON config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Seed for random suites (overrides config)");
  auto* output_opt = run->add_option("--output", output_path, "CSV output path (overrides config)");

  auto* list = app.add_subcommand("list-scenarios", "List scenario names");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << metrolab::describe_scenarios();
    return 0;
  }

  metrolab::ConfigOverrides overrides;
  if (run->parsed()) {
    if (*seed_opt) overrides.seed = seed;
    if (*output_opt) overrides.output_path = output_path;
  }
  metrolab::ValidationResult result;
  if (int rc = load(config_path, overrides, result); rc != 0) return rc;

  if (validate->parsed()) {
    std::cout << "ok: " << metrolab::scenario_name(result.config->scenario) << '\n';
    return 0;
  }
  return metrolab::run_scenario(*result.config, std::cout);
}
