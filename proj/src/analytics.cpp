#include "relaysim/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaysim/numerics.hpp"

namespace relaysim {

double expected_relay_power(double gamma, double var_g, double snr_remainder,
                            double noise_power_w) {
  if (!(var_g > 0.0)) throw std::domain_error("expected_relay_power: var_g must be positive");
  if (!(noise_power_w > 0.0))
    throw std::domain_error("expected_relay_power: noise power must be positive");
  if (snr_remainder < 0.0)
    throw std::domain_error("expected_relay_power: snr_remainder must be >= 0");
  if (snr_remainder == 0.0) return 0.0;
  if (gamma == 0.0)
    throw std::domain_error("expected_relay_power: diverges at gamma = 0");
  if (std::isinf(gamma)) return 0.0;
  const double mean_gain = 2.0 * var_g;
  return snr_remainder * noise_power_w * exp_integral_e1(gamma / mean_gain) / mean_gain;
}

AnalyticReport expected_power_report(double source_power_w, double gamma,
                                     std::span<const double> reliable_var_g,
                                     double snr_remainder, double outage,
                                     const NetworkScenario& scenario) {
  if (source_power_w < 0.0)
    throw std::domain_error("expected_power_report: source power must be >= 0");
  if (!(outage >= 0.0 && outage <= 1.0))
    throw std::domain_error("expected_power_report: outage must lie in [0, 1]");
  AnalyticReport report;
  report.expected_source_power_w = source_power_w;
  report.outage = outage;
  report.per_relay_power_w.reserve(reliable_var_g.size());
  for (double v : reliable_var_g) {
    const double p = expected_relay_power(gamma, v, snr_remainder, scenario.noise_power_w);
    report.per_relay_power_w.push_back(p);
    report.expected_relay_power_w += p;
  }
  report.expected_total_w = report.expected_source_power_w + report.expected_relay_power_w;
  return report;
}

double effective_gain(double gamma, std::span<const double> reliable_var_g) {
  if (reliable_var_g.empty())
    throw std::domain_error("effective_gain: reliable set must be nonempty");
  if (!(gamma > 0.0)) throw std::domain_error("effective_gain: diverges at gamma = 0");
  if (std::isinf(gamma)) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double v : reliable_var_g) {
    if (!(v > 0.0)) throw std::domain_error("effective_gain: variances must be positive");
    sum += exp_integral_e1(gamma / (2.0 * v)) / (2.0 * v);
  }
  return 1.0 / sum;
}

double expected_additional_power(std::span<const double> odpa_expected_totals_w,
                                 std::span<const double> ocpa_totals_w) {
  if (odpa_expected_totals_w.size() != ocpa_totals_w.size())
    throw std::invalid_argument("expected_additional_power: ensembles differ in size");
  if (odpa_expected_totals_w.empty())
    throw std::invalid_argument("expected_additional_power: empty ensemble");
  double sum = 0.0;
  for (std::size_t i = 0; i < odpa_expected_totals_w.size(); ++i)
    sum += odpa_expected_totals_w[i] - ocpa_totals_w[i];
  return sum / static_cast<double>(odpa_expected_totals_w.size());
}

double direct_outage(double source_power_w, double var_h, const NetworkScenario& scenario) {
  if (source_power_w < 0.0) throw std::domain_error("direct_outage: power must be >= 0");
  if (!(var_h > 0.0)) throw std::domain_error("direct_outage: var_h must be positive");
  if (source_power_w == 0.0) return 1.0;
  const double exponent =
      scenario.snr_target * scenario.noise_power_w / (2.0 * var_h * source_power_w);
  return -std::expm1(-exponent);
}

double iid_design_identity(double source_power_w, double gamma, double var_f, double var_g,
                           int relay_count, double rho_target,
                           const NetworkScenario& scenario) {
  if (!(source_power_w > 0.0))
    throw std::domain_error("iid_design_identity: source power must be positive");
  if (!(var_f > 0.0) || !(var_g > 0.0))
    throw std::domain_error("iid_design_identity: variances must be positive");
  if (relay_count < 1) throw std::domain_error("iid_design_identity: relay count must be >= 1");
  if (!(rho_target > 0.0 && rho_target < 1.0))
    throw std::domain_error("iid_design_identity: rho_target must lie in (0,1)");
  const double lhs =
      scenario.snr_target * scenario.noise_power_w / (2.0 * source_power_w * var_f) +
      gamma / (2.0 * var_g);
  const double rhs = -std::log1p(-std::pow(rho_target, 1.0 / relay_count));
  return lhs - rhs;
}

}  // namespace relaysim
