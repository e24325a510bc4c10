#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/scenario.hpp"
#include "relaysim/strategies.hpp"

namespace relaysim {

/// Strategy plus the per-strategy knobs a sweep needs.
struct StrategySpec {
  StrategyKind kind = StrategyKind::Odpa;
  std::optional<PsmParams> psm;  // fixed pair; computed from statistics when absent
  double ocpa_power_cap_w = std::numeric_limits<double>::infinity();
};

struct DestinationBox {
  double x0 = 20.0, x1 = 100.0;
  double y0 = -50.0, y1 = 50.0;
};

struct TrialOptions {
  std::optional<DestinationBox> randomized_destination;
};

struct TrialOutcome {
  double source_power_w = 0.0;
  double relay_power_total_w = 0.0;
  int forwarding_count = 0;
  double destination_snr = 0.0;
  bool outage = false;
  bool fallback = false;    // relay-capable strategy ended up direct-only
  bool infeasible = false;  // allocator could not produce a decision
  bool capped = false;      // centralized total exceeded the power cap

  double total_power_w() const { return source_power_w + relay_power_total_w; }
};

struct SweepResult {
  StrategyKind strategy = StrategyKind::Odpa;
  double rho_target = 0.0;
  int trials = 0;
  double outage_rate = 0.0;
  double outage_ci95 = 0.0;
  double mean_total_power_w = 0.0;
  double power_ci95_w = 0.0;
  double mean_source_power_w = 0.0;
  double mean_relay_power_w = 0.0;
  double fallback_rate = 0.0;
  double infeasible_rate = 0.0;
  std::uint64_t master_seed = 0;
};

/// One fading draw, one allocation, one slot of relay decisions. The stream
/// is derived from (master_seed, trial_index) alone, so results do not depend
/// on which worker runs the trial.
TrialOutcome run_trial(const StrategySpec& spec, const NetworkScenario& scenario,
                       const ChannelStatistics& stats, double rho_target,
                       std::uint64_t master_seed, std::uint64_t trial_index,
                       const TrialOptions& options = {});

struct SweepOptions {
  int trials = 10000;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  TrialOptions trial;
  PsmGridSpec psm_grid;
};

/// Fills in PSM parameters when the spec leaves them to the statistics.
StrategySpec resolve_strategy(const StrategySpec& spec, const ChannelStatistics& stats,
                              double rho_target, const PsmGridSpec& grid,
                              const NetworkScenario& scenario);

std::vector<TrialOutcome> run_trials(const StrategySpec& spec, const NetworkScenario& scenario,
                                     const ChannelStatistics& stats, double rho_target,
                                     const SweepOptions& options);

SweepResult aggregate_trials(StrategyKind kind, double rho_target,
                             std::span<const TrialOutcome> outcomes,
                             std::uint64_t master_seed);

std::vector<SweepResult> run_sweep(const StrategySpec& spec, const NetworkScenario& scenario,
                                   std::span<const double> rho_targets,
                                   const SweepOptions& options);

/// Continuum sweep of the source power used to validate the discrete
/// candidate-set claim: the grid optimum should never beat the discrete one.
struct GridOptimum {
  double source_power_w = 0.0;
  double gamma = std::numeric_limits<double>::infinity();
  double expected_total_w = 0.0;
};
GridOptimum source_power_grid_oracle(std::span<const double> f_sq, double h_sq,
                                       std::span<const double> var_g, double rho_target,
                                       int grid_points, const NetworkScenario& scenario);

/// Exhaustive quantized search over (source power, single forwarding relay)
/// certifying the centralized allocation on tiny instances.
struct OcpaOracleResult {
  double total_power_w = 0.0;
  double step_w = 0.0;
};
OcpaOracleResult ocpa_exhaustive_oracle(const ChannelRealization& real,
                                        const NetworkScenario& scenario, int quant_steps);

}  // namespace relaysim
