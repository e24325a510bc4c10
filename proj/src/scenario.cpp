#include "relaysim/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "relaysim/rng.hpp"

namespace relaysim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void NetworkScenario::validate() const {
  if (!(alpha > 0.0)) throw std::domain_error("scenario: alpha must be positive");
  if (!(antenna_gain_tx > 0.0) || !(antenna_gain_rx > 0.0))
    throw std::domain_error("scenario: antenna gains must be positive");
  if (!(wavelength_m > 0.0)) throw std::domain_error("scenario: wavelength must be positive");
  if (!(system_loss >= 1.0)) throw std::domain_error("scenario: system_loss must be >= 1");
  if (!(noise_power_w > 0.0)) throw std::domain_error("scenario: noise_power must be positive");
  if (!(snr_target > 0.0)) throw std::domain_error("scenario: snr_target must be positive");
  if (!(distance(source_pos, dest_pos) > 0.0))
    throw std::domain_error("scenario: source and destination coincide");
  for (std::size_t i = 0; i < relay_positions.size(); ++i) {
    if (!(distance(source_pos, relay_positions[i]) > 0.0))
      throw std::domain_error("scenario: relay " + std::to_string(i) + " coincides with source");
    if (!(distance(relay_positions[i], dest_pos) > 0.0))
      throw std::domain_error("scenario: relay " + std::to_string(i) +
                              " coincides with destination");
  }
}

double pathloss_variance(double distance_m, const NetworkScenario& scenario) {
  if (!(distance_m > 0.0))
    throw std::domain_error("pathloss_variance: distance must be positive");
  const double four_pi_sq = (4.0 * kPi) * (4.0 * kPi);
  const double c = scenario.antenna_gain_tx * scenario.antenna_gain_rx *
                   scenario.wavelength_m * scenario.wavelength_m /
                   (four_pi_sq * scenario.system_loss);
  return c / std::pow(distance_m, scenario.alpha);
}

ChannelStatistics build_statistics(const NetworkScenario& scenario) {
  scenario.validate();
  ChannelStatistics stats;
  const int n = scenario.relay_count();
  stats.var_f.reserve(n);
  stats.var_g.reserve(n);
  for (const Point2& relay : scenario.relay_positions) {
    stats.var_f.push_back(pathloss_variance(distance(scenario.source_pos, relay), scenario));
    stats.var_g.push_back(pathloss_variance(distance(relay, scenario.dest_pos), scenario));
  }
  stats.var_h = pathloss_variance(distance(scenario.source_pos, scenario.dest_pos), scenario);
  return stats;
}

std::vector<Point2> place_relays_in_box(double x0, double x1, double y0, double y1, int count,
                                        std::uint64_t placement_seed) {
  if (count < 0) throw std::domain_error("place_relays_in_box: count must be >= 0");
  if (!(x0 <= x1) || !(y0 <= y1))
    throw std::domain_error("place_relays_in_box: box bounds out of order");
  RandomStream stream(placement_seed);
  std::vector<Point2> positions;
  positions.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double x = stream.uniform_range(x0, x1);
    const double y = stream.uniform_range(y0, y1);
    positions.push_back({x, y});
  }
  return positions;
}

}  // namespace relaysim
