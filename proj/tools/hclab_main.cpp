#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hclab/scenarios.hpp"

namespace {

int run_command(const std::string& scenario, const std::string& config_path,
                const std::string& out_dir, const std::string& report_format, double t_max,
                double dt, int grid_n, long long seed) {
  hclab::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is.good()) {
        std::cerr << "CONFIG_INVALID: cannot open config file '" << config_path << "'\n";
        return 2;
      }
      cfg.document = hclab::Json::parse(is, nullptr, true, true);
      if (cfg.document.contains("scenario") && scenario.empty()) {
        cfg.scenario = cfg.document.at("scenario").get<std::string>();
      }
    }
    if (!scenario.empty()) cfg.scenario = scenario;
    if (cfg.scenario.empty()) {
      std::cerr << "CONFIG_INVALID: no scenario given (use --scenario or a config file)\n";
      return 2;
    }
    if (t_max > 0) cfg.t_max = t_max;
    if (dt > 0) cfg.dt = dt;
    if (grid_n > 0) cfg.grid_n = grid_n;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.out_dir = out_dir;
    cfg.report_format = report_format;
    if (cfg.document.contains("outDir") && out_dir == "hclab-out") {
      cfg.out_dir = cfg.document.at("outDir").get<std::string>();
    }
    if (cfg.document.contains("reportFormat") && report_format == "both") {
      cfg.report_format = cfg.document.at("reportFormat").get<std::string>();
    }

    const auto result = hclab::run_scenario(cfg);
    std::cout << "scenario " << cfg.scenario << ": " << (result.exit_code == 0 ? "PASS" : "FAIL")
              << " (report under " << cfg.out_dir << ")\n";
    for (const auto& check : result.report.at("checks")) {
      std::cout << "  [" << (check.at("pass").get<bool>() ? "ok" : "FAIL") << "] "
                << check.at("name").get<std::string>();
      if (check.contains("value")) {
        std::cout << " = " << check.at("value").dump() << " vs " << check.at("threshold").dump()
                  << " (" << check.at("kind").get<std::string>() << ")";
      }
      std::cout << "\n";
    }
    return result.exit_code;
  } catch (const hclab::Error& e) {
    if (e.code() == hclab::ErrorCode::ConfigInvalid) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hclab::Json::exception& e) {
    std::cerr << "CONFIG_INVALID: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hclab: desk-scale laboratory for higher-order linear dynamics"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list the built-in scenarios");
  bool list_json = false;
  list->add_flag("--json", list_json, "machine-readable output");

  auto* run = app.add_subcommand("run", "run a scenario and write its report");
  std::string scenario, config_path, out_dir = "hclab-out", report_format = "both";
  double t_max = -1.0, dt = -1.0;
  int grid_n = -1;
  long long seed = -1;
  run->add_option("--scenario", scenario, "scenario name (see `hclab list`)");
  run->add_option("--config", config_path, "JSON configuration file");
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--seed", seed, "seed override");
  run->add_option("--t-max", t_max, "horizon override");
  run->add_option("--dt", dt, "step override");
  run->add_option("--grid-n", grid_n, "grid size override");
  run->add_option("--report-format", report_format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    const auto scenarios = hclab::list_scenarios();
    if (list_json) {
      hclab::Json j = hclab::Json::array();
      for (const auto& s : scenarios) {
        j.push_back(hclab::Json{{"name", s.name}, {"description", s.description}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& s : scenarios) {
        std::cout << s.name << "\t" << s.description << "\n";
      }
    }
    return 0;
  }
  return run_command(scenario, config_path, out_dir, report_format, t_max, dt, grid_n, seed);
}
