#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsslink/experiment.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  // start:step:stop
  double start = 0.0, step = 0.0, stop = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0.0) {
    throw CLI::ValidationError("--sweep grid must be start:step:stop with step > 0");
  }
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-state RSS link simulator and tracker"};

  std::string scenario_path;
  std::string model = "three-state";
  int runs = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::string sweep;

  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--model", model,
                 "Model: three-state, exponential, exponential-rayleigh or all");
  app.add_option("--runs", runs, "Monte-Carlo runs per model");
  app.add_option("--seed", seed, "Base RNG seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--set", overrides, "Parameter override key=value (repeatable)");
  app.add_option("--sweep", sweep, "Parameter sweep name=start:step:stop");

  CLI11_PARSE(app, argc, argv);

  try {
    rsslink::RunConfig config;
    config.scenario = rsslink::Scenario::load(scenario_path);
    config.monte_carlo_runs = runs;
    config.seed = seed;
    config.out_dir = out_dir;
    config.tracker.ellipse = config.scenario.person;
    config.tracker.shadow_half_width = config.scenario.shadow_half_width;
    config.tracker.ts = config.scenario.ts;

    if (model == "all") {
      config.models = {rsslink::TrackerConfig::Model::Exponential,
                       rsslink::TrackerConfig::Model::ExponentialRayleigh,
                       rsslink::TrackerConfig::Model::ThreeState};
    } else {
      config.models = {rsslink::model_from_name(model)};
    }

    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
      config.apply_override(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
    }

    if (!sweep.empty()) {
      const auto eq = sweep.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--sweep expects name=grid");
      const std::string name = sweep.substr(0, eq);
      const auto grid = parse_grid(sweep.substr(eq + 1));
      const auto points = rsslink::sweep_parameter(config, name, grid);
      const std::string csv = rsslink::sweep_csv(name, points);
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / ("sweep_" + name + ".csv")) << csv;
      std::cout << csv;
    } else {
      const auto summary = rsslink::run_experiment(config);
      std::cout << summary.to_table();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
