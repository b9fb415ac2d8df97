#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "config.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  using namespace mvlab::cli;

  CLI::App app{"mvlab: multiverse laboratory experiments"};
  std::string experiment_name;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
  bool quiet = false;

  app.add_option("experiment", experiment_name, "Experiment to run")->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--set", overrides, "Parameter override key=value (repeatable)");
  app.add_option("--out-dir", out_dir, "Directory receiving outputs");
  app.add_option("--seed", seed, "Seed for stochastic experiments");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const auto experiment = parse_experiment(experiment_name);
  if (!experiment) {
    std::cerr << "mvlab: unknown experiment '" << experiment_name << "' (key: experiment)\n";
    return kExitValidation;
  }

  Json document;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "mvlab: cannot read config '" << config_path << "'\n";
      return kExitIo;
    }
    try {
      document = Json::parse(in);
    } catch (const Json::parse_error& e) {
      std::cerr << "mvlab: config is not valid JSON (key: <config>): " << e.what() << "\n";
      return kExitValidation;
    }
  }

  ExperimentConfig config{*experiment, {}};
  try {
    config = build_config(*experiment, document, overrides, seed);
  } catch (const ConfigError& e) {
    std::cerr << "mvlab: " << e.what() << " (key: " << e.key() << ")\n";
    return kExitValidation;
  }

  const auto result = run(config, out_dir);
  if (result.status != kExitOk) {
    std::cerr << "mvlab: " << result.message << "\n";
    return result.status;
  }
  if (!quiet) {
    for (const auto& p : result.written) std::cout << p.string() << "\n";
  }
  return kExitOk;
}
