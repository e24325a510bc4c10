#pragma once

#include <span>
#include <vector>

#include "relaysim/scenario.hpp"

namespace relaysim {

/// Closed-form prediction for one operating point.
struct AnalyticReport {
  double expected_source_power_w = 0.0;
  double expected_relay_power_w = 0.0;
  double expected_total_w = 0.0;  // source + relay
  double outage = 0.0;
  std::vector<double> per_relay_power_w;
};

/// Expected transmit power of one relay that forwards above threshold gamma:
/// snr_remainder * N0 * E1(gamma / (2 var_g)) / (2 var_g).
double expected_relay_power(double gamma, double var_g, double snr_remainder,
                            double noise_power_w);

/// Assembles the per-relay expected powers of a threshold scheme into one
/// report; `outage` comes from whichever outage formula fits the scheme.
AnalyticReport expected_power_report(double source_power_w, double gamma,
                                     std::span<const double> reliable_var_g,
                                     double snr_remainder, double outage,
                                     const NetworkScenario& scenario);

/// Effective squared gain of the forwarding ensemble:
/// 1 / sum_i E1(gamma / (2 var_i)) / (2 var_i).
double effective_gain(double gamma, std::span<const double> reliable_var_g);

/// Mean difference between per-draw distributed expected totals and the
/// centralized totals over one common realization ensemble.
double expected_additional_power(std::span<const double> odpa_expected_totals_w,
                                 std::span<const double> ocpa_totals_w);

/// 1 - exp(-snr_target * N0 / (2 var_h P_s)); equals 1 at P_s = 0.
double direct_outage(double source_power_w, double var_h, const NetworkScenario& scenario);

/// Residual of the i.i.d. design rule
/// snr_target*N0/(2 P_s var_f) + gamma/(2 var_g) = -ln(1 - rho^(1/N)),
/// valid as a guide when the direct link is unreliable. Diagnostic only.
double iid_design_identity(double source_power_w, double gamma, double var_f, double var_g,
                           int relay_count, double rho_target,
                           const NetworkScenario& scenario);

}  // namespace relaysim
