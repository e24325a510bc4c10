#include "relaysim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace relaysim {

const char* const kResultsCsvHeader =
    "strategy,rho_target,rho_empirical,rho_ci95,mean_total_power_w,power_ci95_w,"
    "mean_source_power_w,mean_relay_power_w,fallback_rate,trials,master_seed";

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void write_row(const SweepResult& r, std::ostream& out) {
  out << strategy_name(r.strategy) << ',' << num(r.rho_target) << ','
      << num(r.outage_rate) << ',' << num(r.outage_ci95) << ','
      << num(r.mean_total_power_w) << ',' << num(r.power_ci95_w) << ','
      << num(r.mean_source_power_w) << ',' << num(r.mean_relay_power_w) << ','
      << num(r.fallback_rate) << ',' << r.trials << ',' << r.master_seed << '\n';
}

void write_trial_dump(StrategyKind kind, double rho, std::span<const TrialOutcome> outcomes,
                      std::ostream& out) {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const TrialOutcome& o = outcomes[i];
    out << strategy_name(kind) << ',' << num(rho) << ',' << i << ','
        << num(o.source_power_w) << ',' << num(o.relay_power_total_w) << ','
        << num(o.total_power_w()) << ',' << o.forwarding_count << ','
        << num(o.destination_snr) << ',' << (o.outage ? 1 : 0) << ','
        << (o.fallback ? 1 : 0) << ',' << (o.infeasible ? 1 : 0) << ','
        << (o.capped ? 1 : 0) << '\n';
  }
}

ExperimentResult run_all(const ExperimentConfig& config, std::ostream* dump) {
  config.validate();
  const NetworkScenario scenario = config.materialize_scenario();
  const ChannelStatistics stats = build_statistics(scenario);

  std::vector<double> rhos = config.run.rho_targets;
  std::sort(rhos.begin(), rhos.end());

  SweepOptions options;
  options.trials = config.run.trials;
  options.master_seed = config.run.master_seed;
  options.workers = config.run.workers;
  options.trial.randomized_destination = config.run.destination_box;
  options.psm_grid = config.run.psm_grid;

  ExperimentResult result;
  for (StrategyKind kind : config.run.strategies) {
    StrategySpec spec;
    spec.kind = kind;
    spec.psm = config.run.psm_fixed;
    spec.ocpa_power_cap_w = config.run.ocpa_p_max_w;
    for (double rho : rhos) {
      const std::vector<TrialOutcome> outcomes =
          run_trials(spec, scenario, stats, rho, options);
      result.rows.push_back(aggregate_trials(kind, rho, outcomes, config.run.master_seed));
      if (dump) write_trial_dump(kind, rho, outcomes, *dump);
    }
  }

  // Power saved relative to random relay selection at matched outage targets.
  std::map<double, double> rrs_total;
  for (const SweepResult& r : result.rows)
    if (r.strategy == StrategyKind::Rrs) rrs_total[r.rho_target] = r.mean_total_power_w;
  for (const SweepResult& r : result.rows) {
    if (r.strategy == StrategyKind::Rrs) continue;
    const auto it = rrs_total.find(r.rho_target);
    if (it == rrs_total.end() || !(it->second > 0.0)) continue;
    const double savings = 1.0 - r.mean_total_power_w / it->second;
    std::ostringstream line;
    line << "rho_target=" << num(r.rho_target) << ": " << strategy_name(r.strategy)
         << " saves " << num(100.0 * savings) << "% power vs rrs";
    result.summary_lines.push_back(line.str());
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_all(config, nullptr);
}

void write_results_csv(const std::vector<SweepResult>& rows, std::ostream& out) {
  out << kResultsCsvHeader << '\n';
  for (const SweepResult& r : rows) write_row(r, out);
}

void emit_curve_data(std::vector<SweepResult> rows, std::ostream& out) {
  std::sort(rows.begin(), rows.end(), [](const SweepResult& a, const SweepResult& b) {
    const std::string_view an = strategy_name(a.strategy);
    const std::string_view bn = strategy_name(b.strategy);
    return an != bn ? an < bn : a.rho_target < b.rho_target;
  });
  out << "strategy,rho_target,rho_empirical,mean_total_power_w\n";
  for (const SweepResult& r : rows)
    out << strategy_name(r.strategy) << ',' << num(r.rho_target) << ','
        << num(r.outage_rate) << ',' << num(r.mean_total_power_w) << '\n';
}

void run_experiment_to_files(const ExperimentConfig& config, std::ostream& log) {
  config.validate();

  std::ofstream csv(config.output.csv_path, std::ios::trunc);
  if (!csv)
    throw std::runtime_error("cannot write results to '" + config.output.csv_path + "'");

  std::ofstream dump;
  if (config.output.per_trial_dump) {
    dump.open(config.output.csv_path + ".trials.csv", std::ios::trunc);
    if (!dump)
      throw std::runtime_error("cannot write per-trial dump next to '" +
                               config.output.csv_path + "'");
    dump << "strategy,rho_target,trial,source_power_w,relay_power_w,total_power_w,"
            "forwarding_count,destination_snr,outage,fallback,infeasible,capped\n";
  }

  const ExperimentResult result = run_all(config, dump.is_open() ? &dump : nullptr);
  for (const std::string& line : result.summary_lines) log << line << '\n';

  write_results_csv(result.rows, csv);
  if (!csv) throw std::runtime_error("failed while writing '" + config.output.csv_path + "'");

  std::ofstream curve(config.output.csv_path + ".curve.csv", std::ios::trunc);
  if (!curve)
    throw std::runtime_error("cannot write curve data next to '" + config.output.csv_path +
                             "'");
  emit_curve_data(result.rows, curve);
}

}  // namespace relaysim
