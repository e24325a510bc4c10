#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/scenario.hpp"

namespace relaysim {

enum class StrategyKind { Direct, Ocpa, Odpa, Psm, Srm, Rrs };

std::string_view strategy_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

enum class DecisionMode { DirectOnly, DistributedThreshold, DesignatedRelay };

/// Output of an allocation strategy for one channel state.
///
/// In distributed-threshold mode every reliable relay compares its own |g|^2
/// against `threshold`; in designated-relay mode only `designated_relay`
/// forwards, gated by its per-relay threshold. Direct-only mode sets the
/// threshold to +inf and the SNR remainder to zero.
struct AllocationDecision {
  StrategyKind strategy = StrategyKind::Direct;
  DecisionMode mode = DecisionMode::DirectOnly;
  double source_power_w = 0.0;
  double threshold = std::numeric_limits<double>::infinity();  // gamma or tau_k
  std::optional<int> designated_relay;
  double snr_remainder = 0.0;  // (snr_target - P_s |h|^2 / N0)^+
  double relay_power_w = 0.0;  // explicit relay power (centralized allocation)
  double expected_total_w = std::numeric_limits<double>::quiet_NaN();  // where defined
};

/// One entry of the discrete source-power candidate set: the candidate power,
/// the reliable set it induces, the solved threshold and the expected total.
struct CandidateEvaluation {
  double candidate_source_power_w = 0.0;
  ReliableSet reliable;
  double threshold = std::numeric_limits<double>::infinity();
  double g_eff_sq = std::numeric_limits<double>::infinity();
  double expected_total_w = 0.0;
  bool is_direct = false;
  std::optional<int> boundary_relay;  // relay whose gain pins this candidate
};

struct PsmParams {
  double source_power_w = 0.0;
  double gamma = 0.0;
};

struct PsmGridSpec {
  double max_source_power_w = 10.0;
  int points = 48;
};

/// Centralized optimum: requires the full CSI (f, g, h realizations).
AllocationDecision ocpa_allocate(const ChannelRealization& real,
                                 const NetworkScenario& scenario);

/// Distributed optimum: source CSI is {f_i}, h and the g statistics only.
AllocationDecision odpa_allocate(std::span<const double> f_sq, double h_sq,
                                 std::span<const double> var_g, double rho_target,
                                 const NetworkScenario& scenario);

/// The discrete candidate set behind odpa_allocate, one evaluation per entry.
std::vector<CandidateEvaluation> odpa_candidates(std::span<const double> f_sq, double h_sq,
                                                 std::span<const double> var_g,
                                                 double rho_target,
                                                 const NetworkScenario& scenario);

/// Threshold gamma solving prod_i(1 - exp(-gamma / (2 var_i))) = rho_target
/// over the reliable set.
double solve_threshold(std::span<const double> reliable_var_g, double rho_target);

/// Closed-form bracket for the solved threshold.
struct ThresholdBounds {
  double lo = 0.0;
  double hi = 0.0;
};
ThresholdBounds threshold_bounds(std::span<const double> reliable_var_g, double rho_target);

/// The per-relay forwarding rule; returns the transmit power when the relay
/// decides to forward. The boundary |g|^2 == threshold is inclusive.
std::optional<double> relay_forward_decision(int relay_index, double g_sq_i,
                                             const AllocationDecision& decision,
                                             bool is_reliable,
                                             const NetworkScenario& scenario);

/// Overall outage of the passive source model at fixed (P_s, gamma).
double psm_outage(double source_power_w, double gamma, const ChannelStatistics& stats,
                  const NetworkScenario& scenario);

/// SNR remainder averaged over the direct-link fading,
/// E[(snr_target - P_s |h|^2 / N0)^+]; the PSM source never sees h.
double psm_mean_snr_remainder(double source_power_w, const ChannelStatistics& stats,
                              const NetworkScenario& scenario);

/// Analytic expected total power of the passive source model at (P_s, gamma).
double psm_expected_total(double source_power_w, double gamma, const ChannelStatistics& stats,
                          const NetworkScenario& scenario);

/// Grid search for a (P_s, gamma) pair meeting the outage target with the
/// smallest analytic expected total. Empty when the target is unreachable
/// within the grid.
std::optional<PsmParams> psm_pick_params(const ChannelStatistics& stats, double rho_target,
                                         const PsmGridSpec& grid,
                                         const NetworkScenario& scenario);

/// Probability that relay i forwards at gain x despite a better reliable
/// relay existing.
double psm_wrong_forwarding_prob(int relay_index, double x, double source_power_w,
                                 const ChannelStatistics& stats,
                                 const NetworkScenario& scenario);

/// Expected power spent by relays that forward without holding the best
/// relay-to-destination gain among the reliable set.
double psm_expected_waste(double source_power_w, double gamma, const ChannelStatistics& stats,
                          const NetworkScenario& scenario);

/// Single relay model: source picks one relay from {f_i}, h and g statistics.
AllocationDecision srm_allocate(std::span<const double> f_sq, double h_sq,
                                std::span<const double> var_g, double rho_target,
                                const NetworkScenario& scenario);

/// Uniformly random relay with the single-relay power and threshold rule.
AllocationDecision rrs_allocate(std::span<const double> f_sq, double h_sq,
                                std::span<const double> var_g, double rho_target,
                                RandomStream& stream, const NetworkScenario& scenario);

AllocationDecision direct_allocate(double h_sq, const NetworkScenario& scenario);

}  // namespace relaysim
