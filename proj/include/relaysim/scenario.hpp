#pragma once

#include <cstdint>
#include <vector>

#include "relaysim/geometry.hpp"

namespace relaysim {

/// Node geometry, propagation constants and link-budget targets shared by
/// every allocation strategy. Immutable value after construction.
struct NetworkScenario {
  Point2 source_pos{0.0, 0.0};
  Point2 dest_pos{100.0, 0.0};
  std::vector<Point2> relay_positions;

  double alpha = 3.0;  // path-loss exponent
  double antenna_gain_tx = 1.0;
  double antenna_gain_rx = 1.0;
  double wavelength_m = 1.0 / 3.0;  // 900 MHz carrier
  double system_loss = 1.0;         // >= 1, not related to propagation
  double noise_power_w = 1e-10;
  double snr_target = 10.0;  // linear

  int relay_count() const { return static_cast<int>(relay_positions.size()); }

  /// Throws std::domain_error when an invariant is violated.
  void validate() const;
};

/// Per-dimension Rayleigh variances of every link in the network.
struct ChannelStatistics {
  std::vector<double> var_f;  // source -> relay i
  std::vector<double> var_g;  // relay i -> destination
  double var_h = 0.0;         // source -> destination

  int relay_count() const { return static_cast<int>(var_f.size()); }
};

/// C / d^alpha with C = Gt * Gr * lambda^2 / ((4 pi)^2 * L).
double pathloss_variance(double distance_m, const NetworkScenario& scenario);

ChannelStatistics build_statistics(const NetworkScenario& scenario);

/// Uniform placement in [x0,x1] x [y0,y1], fixed by the placement seed so that
/// power-vs-outage sweeps vary only the fading.
std::vector<Point2> place_relays_in_box(double x0, double x1, double y0, double y1, int count,
                                        std::uint64_t placement_seed);

}  // namespace relaysim
