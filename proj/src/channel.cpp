#include "relaysim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace relaysim {

bool ReliableSet::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

ChannelRealization draw_realization(const ChannelStatistics& stats, RandomStream& stream) {
  // Draw order (f block, g block, h) is fixed; it is part of the seed contract.
  ChannelRealization real;
  real.f_sq.reserve(stats.var_f.size());
  real.g_sq.reserve(stats.var_g.size());
  for (double v : stats.var_f) real.f_sq.push_back(stream.exponential(2.0 * v));
  for (double v : stats.var_g) real.g_sq.push_back(stream.exponential(2.0 * v));
  real.h_sq = stream.exponential(2.0 * stats.var_h);
  return real;
}

double received_snr(double power_w, double gain_sq, double noise_power_w) {
  if (!(noise_power_w > 0.0))
    throw std::domain_error("received_snr: noise power must be positive");
  if (power_w < 0.0) throw std::domain_error("received_snr: power must be >= 0");
  return power_w * gain_sq / noise_power_w;
}

double snr_remainder(double source_power_w, double h_sq, const NetworkScenario& scenario) {
  const double direct = received_snr(source_power_w, h_sq, scenario.noise_power_w);
  if (meets_snr(direct, scenario.snr_target)) return 0.0;
  return scenario.snr_target - direct;
}

ReliableSet reliable_set(double source_power_w, const ChannelRealization& real,
                         const NetworkScenario& scenario) {
  ReliableSet set;
  for (int i = 0; i < real.relay_count(); ++i) {
    const double snr = received_snr(source_power_w, real.f_sq[i], scenario.noise_power_w);
    if (meets_snr(snr, scenario.snr_target)) set.indices.push_back(i);
  }
  return set;
}

double mrc_snr(double source_power_w, double h_sq,
               const std::vector<RelayContribution>& forwarding, double noise_power_w) {
  if (!(noise_power_w > 0.0)) throw std::domain_error("mrc_snr: noise power must be positive");
  double received = source_power_w * h_sq;
  for (const RelayContribution& c : forwarding) received += c.power_w * c.gain_sq;
  return received / noise_power_w;
}

}  // namespace relaysim
