#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/montecarlo.hpp"

namespace relaysim {

/// Fixed schema of the primary results table.
extern const char* const kResultsCsvHeader;

struct ExperimentResult {
  std::vector<SweepResult> rows;          // one per (strategy, rho_target)
  std::vector<std::string> summary_lines;  // savings vs random selection
};

/// Runs every (strategy, rho) combination of a validated config.
/// Deterministic given the config: identical inputs give identical rows.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_results_csv(const std::vector<SweepResult>& rows, std::ostream& out);

/// Plot-ready long-format table sorted by (strategy, rho_target); values are
/// copied verbatim from the primary rows.
void emit_curve_data(std::vector<SweepResult> rows, std::ostream& out);

/// Runs the experiment and writes the primary CSV, the curve CSV
/// (<csv>.curve.csv) and the optional per-trial dump (<csv>.trials.csv).
/// Summary lines go to `log`.
void run_experiment_to_files(const ExperimentConfig& config, std::ostream& log);

}  // namespace relaysim
