#pragma once

#include <vector>

#include "relaysim/rng.hpp"
#include "relaysim/scenario.hpp"

namespace relaysim {

/// One draw of squared channel gains. A squared gain whose underlying complex
/// coefficient has per-dimension variance s2 is exponential with mean 2*s2.
struct ChannelRealization {
  std::vector<double> f_sq;  // |f_i|^2
  std::vector<double> g_sq;  // |g_i|^2
  double h_sq = 0.0;         // |h|^2

  int relay_count() const { return static_cast<int>(f_sq.size()); }
};

/// Relays whose received SNR meets the decodability target, ascending order.
struct ReliableSet {
  std::vector<int> indices;

  bool contains(int i) const;
  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
};

/// Relative margin below the target at which an SNR is declared failing.
/// Allocators set powers so the boundary node hits the target exactly; the
/// product round-trips through a division, so an exact >= would misclassify
/// boundary nodes by a few ulp.
inline constexpr double kSnrBoundaryMargin = 1e-9;

inline bool meets_snr(double snr, double target) {
  return snr >= target * (1.0 - kSnrBoundaryMargin);
}

ChannelRealization draw_realization(const ChannelStatistics& stats, RandomStream& stream);

double received_snr(double power_w, double gain_sq, double noise_power_w);

/// (SNR_target - P_s |h|^2 / N0)^+, the SNR the relays must still supply.
/// Zero when the direct link alone meets the target (boundary margin applies).
double snr_remainder(double source_power_w, double h_sq, const NetworkScenario& scenario);

ReliableSet reliable_set(double source_power_w, const ChannelRealization& real,
                         const NetworkScenario& scenario);

/// One forwarding relay's contribution to the MRC combiner.
struct RelayContribution {
  double power_w;
  double gain_sq;
};

double mrc_snr(double source_power_w, double h_sq,
               const std::vector<RelayContribution>& forwarding, double noise_power_w);

}  // namespace relaysim
