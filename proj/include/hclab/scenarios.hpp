#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hclab/serialize.hpp"

namespace hclab {

/// Runner configuration: scenario name, optional config document, and the
/// command-line overrides (a set flag wins over the config file).
struct ScenarioConfig {
  std::string scenario;
  Json document = Json::object();
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<int> grid_n;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "hclab-out";
  std::string report_format = "both";  // json | csv | both

  /// Config value with flag override and default, validated positive when
  /// `positive` is set. Throws CONFIG_INVALID with the field path.
  double number(const std::string& key, double fallback, bool positive = true) const;
  int integer(const std::string& key, int fallback, int min_value = 1) const;
  std::uint64_t seed_value(std::uint64_t fallback) const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Stable-ordered scenario table.
std::vector<ScenarioInfo> list_scenarios();

/// Exit code contract: 0 all declared tolerances met, 1 a tolerance
/// failed, 2 invalid configuration (the CLI maps CONFIG_INVALID to 2).
struct ScenarioResult {
  int exit_code = 0;
  Json report;
};

/// Runs one scenario and writes report.json, meta.json and curves/*.csv
/// under the output directory. Timestamps go only to meta.json so that
/// report bytes are reproducible for a fixed config and seed.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace hclab
