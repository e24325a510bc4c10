#include "relaysim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "relaysim/analytics.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/numerics.hpp"

namespace relaysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ95 = 1.96;

AllocationDecision allocate_for(const StrategySpec& spec, const ChannelRealization& real,
                                const ChannelStatistics& stats, double rho_target,
                                RandomStream& stream, const NetworkScenario& scenario) {
  switch (spec.kind) {
    case StrategyKind::Direct:
      return direct_allocate(real.h_sq, scenario);
    case StrategyKind::Ocpa:
      return ocpa_allocate(real, scenario);
    case StrategyKind::Odpa:
      return odpa_allocate(real.f_sq, real.h_sq, stats.var_g, rho_target, scenario);
    case StrategyKind::Srm:
      return srm_allocate(real.f_sq, real.h_sq, stats.var_g, rho_target, scenario);
    case StrategyKind::Rrs:
      return rrs_allocate(real.f_sq, real.h_sq, stats.var_g, rho_target, stream, scenario);
    case StrategyKind::Psm: {
      if (!spec.psm)
        throw std::invalid_argument("run_trial: passive source model needs fixed parameters");
      AllocationDecision d;
      d.strategy = StrategyKind::Psm;
      d.mode = DecisionMode::DistributedThreshold;
      d.source_power_w = spec.psm->source_power_w;
      d.threshold = spec.psm->gamma;
      d.snr_remainder = snr_remainder(d.source_power_w, real.h_sq, scenario);
      return d;
    }
  }
  throw std::logic_error("run_trial: unknown strategy");
}

int worker_count(int requested, int trials) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  return std::min(n, std::max(trials, 1));
}

}  // namespace

TrialOutcome run_trial(const StrategySpec& spec, const NetworkScenario& scenario,
                       const ChannelStatistics& stats, double rho_target,
                       std::uint64_t master_seed, std::uint64_t trial_index,
                       const TrialOptions& options) {
  RandomStream stream = RandomStream::for_trial(master_seed, trial_index);

  NetworkScenario local_scenario;
  ChannelStatistics local_stats;
  const NetworkScenario* sc = &scenario;
  const ChannelStatistics* st = &stats;
  if (options.randomized_destination) {
    const DestinationBox& box = *options.randomized_destination;
    local_scenario = scenario;
    local_scenario.dest_pos = {stream.uniform_range(box.x0, box.x1),
                               stream.uniform_range(box.y0, box.y1)};
    local_stats = build_statistics(local_scenario);
    sc = &local_scenario;
    st = &local_stats;
  }

  const ChannelRealization real = draw_realization(*st, stream);

  TrialOutcome out;
  AllocationDecision decision;
  try {
    decision = allocate_for(spec, real, *st, rho_target, stream, *sc);
  } catch (const InfeasibleError&) {
    out.infeasible = true;
    out.outage = true;
    return out;
  }

  out.source_power_w = decision.source_power_w;
  out.fallback =
      spec.kind != StrategyKind::Direct && decision.mode == DecisionMode::DirectOnly;

  std::vector<RelayContribution> forwarding;
  if (decision.mode == DecisionMode::DistributedThreshold) {
    for (int i = 0; i < real.relay_count(); ++i) {
      const double snr =
          received_snr(decision.source_power_w, real.f_sq[i], sc->noise_power_w);
      const bool reliable = meets_snr(snr, sc->snr_target);
      if (const auto power = relay_forward_decision(i, real.g_sq[i], decision, reliable, *sc))
        forwarding.push_back({*power, real.g_sq[i]});
    }
  } else if (decision.mode == DecisionMode::DesignatedRelay) {
    const int k = *decision.designated_relay;
    const double snr = received_snr(decision.source_power_w, real.f_sq[k], sc->noise_power_w);
    const bool reliable = meets_snr(snr, sc->snr_target);
    if (const auto power = relay_forward_decision(k, real.g_sq[k], decision, reliable, *sc))
      forwarding.push_back({*power, real.g_sq[k]});
  }

  out.forwarding_count = static_cast<int>(forwarding.size());
  for (const RelayContribution& c : forwarding) out.relay_power_total_w += c.power_w;
  out.destination_snr =
      mrc_snr(decision.source_power_w, real.h_sq, forwarding, sc->noise_power_w);
  out.outage = !meets_snr(out.destination_snr, sc->snr_target);

  if (spec.kind == StrategyKind::Ocpa && std::isfinite(spec.ocpa_power_cap_w) &&
      out.total_power_w() > spec.ocpa_power_cap_w) {
    // Cap convention: the transmission is not attempted, so no power is spent
    // and the slot is an outage.
    out = TrialOutcome{};
    out.capped = true;
    out.outage = true;
  }
  return out;
}

StrategySpec resolve_strategy(const StrategySpec& spec, const ChannelStatistics& stats,
                              double rho_target, const PsmGridSpec& grid,
                              const NetworkScenario& scenario) {
  StrategySpec resolved = spec;
  if (spec.kind == StrategyKind::Psm && !spec.psm) {
    resolved.psm = psm_pick_params(stats, rho_target, grid, scenario);
    if (!resolved.psm)
      throw std::runtime_error("passive source model: outage target unreachable on the grid");
  }
  return resolved;
}

std::vector<TrialOutcome> run_trials(const StrategySpec& spec, const NetworkScenario& scenario,
                                     const ChannelStatistics& stats, double rho_target,
                                     const SweepOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  const StrategySpec resolved =
      resolve_strategy(spec, stats, rho_target, options.psm_grid, scenario);

  std::vector<TrialOutcome> outcomes(options.trials);
  const int workers = worker_count(options.workers, options.trials);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto run_block = [&](int begin, int end) {
    try {
      for (int i = begin; i < end; ++i)
        outcomes[i] = run_trial(resolved, scenario, stats, rho_target, options.master_seed,
                                static_cast<std::uint64_t>(i), options.trial);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  if (workers == 1) {
    run_block(0, options.trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (options.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(options.trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_block, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return outcomes;
}

SweepResult aggregate_trials(StrategyKind kind, double rho_target,
                             std::span<const TrialOutcome> outcomes,
                             std::uint64_t master_seed) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate_trials: no outcomes");
  const double n = static_cast<double>(outcomes.size());

  double sum_source = 0.0, sum_relay = 0.0;
  int outages = 0, fallbacks = 0, infeasible = 0;
  for (const TrialOutcome& o : outcomes) {
    sum_source += o.source_power_w;
    sum_relay += o.relay_power_total_w;
    outages += o.outage ? 1 : 0;
    fallbacks += o.fallback ? 1 : 0;
    infeasible += o.infeasible ? 1 : 0;
  }

  SweepResult r;
  r.strategy = kind;
  r.rho_target = rho_target;
  r.trials = static_cast<int>(outcomes.size());
  r.master_seed = master_seed;
  r.mean_source_power_w = sum_source / n;
  r.mean_relay_power_w = sum_relay / n;
  // Total defined as the sum of the per-node means so the accounting identity
  // holds bit-exactly in the emitted tables.
  r.mean_total_power_w = r.mean_source_power_w + r.mean_relay_power_w;

  double ss = 0.0;
  for (const TrialOutcome& o : outcomes) {
    const double d = o.total_power_w() - r.mean_total_power_w;
    ss += d * d;
  }
  const double var = outcomes.size() > 1 ? ss / (n - 1.0) : 0.0;
  r.power_ci95_w = kZ95 * std::sqrt(var / n);

  r.outage_rate = outages / n;
  r.outage_ci95 = kZ95 * std::sqrt(r.outage_rate * (1.0 - r.outage_rate) / n);
  r.fallback_rate = fallbacks / n;
  r.infeasible_rate = infeasible / n;
  return r;
}

std::vector<SweepResult> run_sweep(const StrategySpec& spec, const NetworkScenario& scenario,
                                   std::span<const double> rho_targets,
                                   const SweepOptions& options) {
  const ChannelStatistics stats = build_statistics(scenario);
  std::vector<SweepResult> results;
  results.reserve(rho_targets.size());
  for (double rho : rho_targets) {
    const std::vector<TrialOutcome> outcomes =
        run_trials(spec, scenario, stats, rho, options);
    results.push_back(aggregate_trials(spec.kind, rho, outcomes, options.master_seed));
  }
  return results;
}

GridOptimum source_power_grid_oracle(std::span<const double> f_sq, double h_sq,
                                       std::span<const double> var_g, double rho_target,
                                       int grid_points, const NetworkScenario& scenario) {
  if (grid_points < 2)
    throw std::invalid_argument("source_power_grid_oracle: need at least 2 grid points");
  if (f_sq.size() != var_g.size())
    throw std::invalid_argument("source_power_grid_oracle: f_sq and var_g sizes differ");

  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;

  double lo = kInf, relay_hi = 0.0;
  for (double f : f_sq) {
    if (!(f > h_sq)) continue;
    const double ps = t * n0 / f;
    lo = std::min(lo, ps);
    relay_hi = std::max(relay_hi, ps);
  }
  const double hi = h_sq > 0.0 ? t * n0 / h_sq : relay_hi;
  if (!std::isfinite(lo)) {
    if (!(h_sq > 0.0))
      throw InfeasibleError("source_power_grid_oracle: no candidates");
    return {hi, kInf, hi};
  }

  GridOptimum best{0.0, kInf, kInf};
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int k = 0; k < grid_points; ++k) {
    const double frac = static_cast<double>(k) / (grid_points - 1);
    const double ps = k == 0 ? lo
                    : k == grid_points - 1
                        ? hi
                        : std::exp(log_lo + frac * (log_hi - log_lo));

    std::vector<double> vars;
    for (std::size_t j = 0; j < f_sq.size(); ++j)
      if (meets_snr(received_snr(ps, f_sq[j], n0), t)) vars.push_back(var_g[j]);

    const double snr_rem = snr_remainder(ps, h_sq, scenario);
    double gamma = kInf;
    double total = ps;
    if (snr_rem > 0.0) {
      if (vars.empty()) continue;  // outage certain below the direct candidate
      gamma = solve_threshold(vars, rho_target);
      for (double v : vars) total += expected_relay_power(gamma, v, snr_rem, n0);
    }
    if (total < best.expected_total_w) best = {ps, gamma, total};
  }
  return best;
}

OcpaOracleResult ocpa_exhaustive_oracle(const ChannelRealization& real,
                                        const NetworkScenario& scenario, int quant_steps) {
  if (quant_steps < 1)
    throw std::invalid_argument("ocpa_exhaustive_oracle: quant_steps must be >= 1");
  const int n = real.relay_count();
  if (n > 4) throw std::invalid_argument("ocpa_exhaustive_oracle: meant for tiny instances");

  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;

  double upper = 0.0;
  if (real.h_sq > 0.0) {
    upper = t * n0 / real.h_sq;
  } else {
    for (double f : real.f_sq)
      if (f > 0.0) upper = std::max(upper, t * n0 / f);
    if (upper == 0.0) throw InfeasibleError("ocpa_exhaustive_oracle: all gains are zero");
  }

  double best = kInf;
  for (int j = 1; j <= quant_steps; ++j) {
    const double ps = upper * j / quant_steps;
    if (meets_snr(received_snr(ps, real.h_sq, n0), t)) best = std::min(best, ps);
    const double snr_rem = snr_remainder(ps, real.h_sq, scenario);
    for (int i = 0; i < n; ++i) {
      if (!meets_snr(received_snr(ps, real.f_sq[i], n0), t)) continue;
      if (snr_rem == 0.0) {
        best = std::min(best, ps);
      } else if (real.g_sq[i] > 0.0) {
        best = std::min(best, ps + snr_rem * n0 / real.g_sq[i]);
      }
    }
  }
  if (!std::isfinite(best))
    throw InfeasibleError("ocpa_exhaustive_oracle: no feasible quantized assignment");
  return {best, upper / quant_steps};
}

}  // namespace relaysim
