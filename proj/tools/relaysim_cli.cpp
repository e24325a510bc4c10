// Command line front end: load a config, apply overrides, run the sweep.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaysim/config.hpp"
#include "relaysim/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Power allocation simulator for parallel decode-and-forward relay networks"};

  std::string config_path;
  std::vector<std::string> overrides;
  int trials = -1;
  std::string seed;
  std::string out_path;
  int workers = -1;
  bool print_config = false;

  app.add_option("--config", config_path, "Config file (see README for the format)");
  app.add_option("--override", overrides,
                 "Override a config value, e.g. --override run.trials=50000");
  app.add_option("--trials", trials, "Shorthand for --override run.trials=N");
  app.add_option("--seed", seed, "Shorthand for --override run.master_seed=S");
  app.add_option("--out", out_path, "Shorthand for --override output.csv=PATH");
  app.add_option("--workers", workers, "Shorthand for --override run.workers=N (0 = auto)");
  app.add_flag("--print-config", print_config,
               "Print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    relaysim::ExperimentConfig config;
    if (!config_path.empty()) config = relaysim::load_config(config_path);
    for (const std::string& assignment : overrides)
      relaysim::apply_override(config, assignment);
    if (trials >= 0)
      relaysim::apply_override(config, "run.trials=" + std::to_string(trials));
    if (!seed.empty()) relaysim::apply_override(config, "run.master_seed=" + seed);
    if (!out_path.empty()) relaysim::apply_override(config, "output.csv=" + out_path);
    if (workers >= 0)
      relaysim::apply_override(config, "run.workers=" + std::to_string(workers));

    config.validate();
    if (print_config) {
      std::cout << relaysim::write_config(config);
      return 0;
    }
    relaysim::run_experiment_to_files(config, std::cout);
    std::cout << "wrote " << config.output.csv_path << "\n";
    return 0;
  } catch (const relaysim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
