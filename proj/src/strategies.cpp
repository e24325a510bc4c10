#include "relaysim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relaysim/analytics.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/numerics.hpp"

namespace relaysim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rho(double rho_target) {
  if (!(rho_target > 0.0 && rho_target < 1.0))
    throw std::domain_error("rho_target must lie in (0, 1)");
}

double reliability_prob(double source_power_w, double var_f, const NetworkScenario& sc) {
  if (source_power_w <= 0.0) return 0.0;
  return std::exp(-sc.snr_target * sc.noise_power_w / (source_power_w * 2.0 * var_f));
}

double gain_tail_prob(double gamma, double var_g) {
  if (std::isinf(gamma)) return 0.0;
  return std::exp(-gamma / (2.0 * var_g));
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Direct: return "direct";
    case StrategyKind::Ocpa: return "ocpa";
    case StrategyKind::Odpa: return "odpa";
    case StrategyKind::Psm: return "psm";
    case StrategyKind::Srm: return "srm";
    case StrategyKind::Rrs: return "rrs";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  if (name == "direct") return StrategyKind::Direct;
  if (name == "ocpa") return StrategyKind::Ocpa;
  if (name == "odpa") return StrategyKind::Odpa;
  if (name == "psm") return StrategyKind::Psm;
  if (name == "srm") return StrategyKind::Srm;
  if (name == "rrs") return StrategyKind::Rrs;
  return std::nullopt;
}

AllocationDecision ocpa_allocate(const ChannelRealization& real,
                                 const NetworkScenario& scenario) {
  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;
  const int n = real.relay_count();

  // Efficient relays: both hops at least as strong as the direct link.
  int best = -1;
  double best_score = kInf;
  for (int i = 0; i < n; ++i) {
    const double f = real.f_sq[i];
    const double g = real.g_sq[i];
    if (!(f >= real.h_sq) || !(g >= real.h_sq)) continue;
    if (f <= 0.0 || g <= 0.0) continue;
    const double score = 1.0 / f + 1.0 / g - real.h_sq / (f * g);
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }

  AllocationDecision d;
  d.strategy = StrategyKind::Ocpa;
  if (best < 0) {
    if (real.h_sq <= 0.0)
      throw InfeasibleError("ocpa_allocate: no efficient relay and no direct link");
    d.mode = DecisionMode::DirectOnly;
    d.source_power_w = t * n0 / real.h_sq;
    d.expected_total_w = d.source_power_w;
    return d;
  }

  d.mode = DecisionMode::DesignatedRelay;
  d.designated_relay = best;
  d.source_power_w = t * n0 / real.f_sq[best];
  d.threshold = 0.0;  // the designated relay always forwards while SNR remains
  d.snr_remainder = snr_remainder(d.source_power_w, real.h_sq, scenario);
  d.relay_power_w =
      d.snr_remainder > 0.0 ? d.snr_remainder * n0 / real.g_sq[best] : 0.0;
  d.expected_total_w = d.source_power_w + d.relay_power_w;
  return d;
}

double solve_threshold(std::span<const double> reliable_var_g, double rho_target) {
  check_rho(rho_target);
  if (reliable_var_g.empty())
    throw std::domain_error("solve_threshold: reliable set must be nonempty");
  for (double v : reliable_var_g)
    if (!(v > 0.0)) throw std::domain_error("solve_threshold: variances must be positive");

  const ThresholdBounds bounds = threshold_bounds(reliable_var_g, rho_target);
  if (bounds.lo == bounds.hi) return bounds.lo;

  const auto residual = [&](double gamma) {
    double prod = 1.0;
    for (double v : reliable_var_g) prod *= -std::expm1(-gamma / (2.0 * v));
    return prod - rho_target;
  };
  if (residual(bounds.lo) >= 0.0) return bounds.lo;
  if (residual(bounds.hi) <= 0.0) return bounds.hi;
  return bisect(residual, bounds.lo, bounds.hi, Tolerance{1e-13, 1e-12, 200});
}

ThresholdBounds threshold_bounds(std::span<const double> reliable_var_g, double rho_target) {
  check_rho(rho_target);
  if (reliable_var_g.empty())
    throw std::domain_error("threshold_bounds: reliable set must be nonempty");
  const auto [vmin, vmax] =
      std::minmax_element(reliable_var_g.begin(), reliable_var_g.end());
  const double scale =
      -std::log1p(-std::pow(rho_target, 1.0 / static_cast<double>(reliable_var_g.size())));
  return {2.0 * *vmin * scale, 2.0 * *vmax * scale};
}

std::vector<CandidateEvaluation> odpa_candidates(std::span<const double> f_sq, double h_sq,
                                                 std::span<const double> var_g,
                                                 double rho_target,
                                                 const NetworkScenario& scenario) {
  check_rho(rho_target);
  if (f_sq.size() != var_g.size())
    throw std::invalid_argument("odpa_candidates: f_sq and var_g sizes differ");

  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;
  const int n = static_cast<int>(f_sq.size());

  std::vector<CandidateEvaluation> out;
  bool any_relay_candidate = false;
  for (int i = 0; i < n; ++i) {
    if (!(f_sq[i] > h_sq)) continue;  // dominated: raising P_s past this gains nothing
    any_relay_candidate = true;

    CandidateEvaluation cand;
    cand.boundary_relay = i;
    cand.candidate_source_power_w = t * n0 / f_sq[i];
    const double ps = cand.candidate_source_power_w;
    for (int j = 0; j < n; ++j)
      if (meets_snr(received_snr(ps, f_sq[j], n0), t)) cand.reliable.indices.push_back(j);

    const double snr_rem = snr_remainder(ps, h_sq, scenario);
    if (snr_rem == 0.0) {
      cand.threshold = kInf;  // no redundant relay transmission
      cand.g_eff_sq = kInf;
      cand.expected_total_w = ps;
    } else {
      std::vector<double> vars;
      vars.reserve(cand.reliable.size());
      for (int j : cand.reliable.indices) vars.push_back(var_g[j]);
      cand.threshold = solve_threshold(vars, rho_target);
      double relay_term = 0.0;
      for (double v : vars) relay_term += expected_relay_power(cand.threshold, v, snr_rem, n0);
      cand.g_eff_sq = effective_gain(cand.threshold, vars);
      cand.expected_total_w = ps + relay_term;
    }
    out.push_back(std::move(cand));
  }

  if (h_sq > 0.0) {
    CandidateEvaluation direct;
    direct.is_direct = true;
    direct.candidate_source_power_w = t * n0 / h_sq;
    for (int j = 0; j < n; ++j)
      if (meets_snr(received_snr(direct.candidate_source_power_w, f_sq[j], n0), t))
        direct.reliable.indices.push_back(j);
    direct.expected_total_w = direct.candidate_source_power_w;
    out.push_back(std::move(direct));
  } else if (!any_relay_candidate) {
    throw InfeasibleError("odpa_candidates: no direct link and no usable relay");
  }
  return out;
}

AllocationDecision odpa_allocate(std::span<const double> f_sq, double h_sq,
                                 std::span<const double> var_g, double rho_target,
                                 const NetworkScenario& scenario) {
  const std::vector<CandidateEvaluation> cands =
      odpa_candidates(f_sq, h_sq, var_g, rho_target, scenario);

  const CandidateEvaluation* best = &cands.front();
  for (const CandidateEvaluation& c : cands)
    if (c.expected_total_w < best->expected_total_w) best = &c;

  AllocationDecision d;
  d.strategy = StrategyKind::Odpa;
  d.source_power_w = best->candidate_source_power_w;
  d.expected_total_w = best->expected_total_w;
  if (best->is_direct) {
    d.mode = DecisionMode::DirectOnly;
  } else {
    d.mode = DecisionMode::DistributedThreshold;
    d.threshold = best->threshold;
    d.snr_remainder = snr_remainder(d.source_power_w, h_sq, scenario);
  }
  return d;
}

std::optional<double> relay_forward_decision(int relay_index, double g_sq_i,
                                             const AllocationDecision& decision,
                                             bool is_reliable,
                                             const NetworkScenario& scenario) {
  if (decision.snr_remainder <= 0.0) return std::nullopt;
  if (!(g_sq_i > 0.0)) return std::nullopt;
  switch (decision.mode) {
    case DecisionMode::DirectOnly:
      return std::nullopt;
    case DecisionMode::DistributedThreshold:
      if (is_reliable && g_sq_i >= decision.threshold)
        return decision.snr_remainder * scenario.noise_power_w / g_sq_i;
      return std::nullopt;
    case DecisionMode::DesignatedRelay:
      if (decision.designated_relay && relay_index == *decision.designated_relay &&
          g_sq_i >= decision.threshold)
        return decision.snr_remainder * scenario.noise_power_w / g_sq_i;
      return std::nullopt;
  }
  return std::nullopt;
}

double psm_outage(double source_power_w, double gamma, const ChannelStatistics& stats,
                  const NetworkScenario& scenario) {
  if (source_power_w < 0.0) throw std::domain_error("psm_outage: power must be >= 0");
  if (gamma < 0.0) throw std::domain_error("psm_outage: gamma must be >= 0");
  if (source_power_w == 0.0) return 1.0;
  double prod = 1.0;
  for (int i = 0; i < stats.relay_count(); ++i) {
    const double a = reliability_prob(source_power_w, stats.var_f[i], scenario);
    const double b = gain_tail_prob(gamma, stats.var_g[i]);
    prod *= 1.0 - a * b;
  }
  return prod * direct_outage(source_power_w, stats.var_h, scenario);
}

double psm_mean_snr_remainder(double source_power_w, const ChannelStatistics& stats,
                              const NetworkScenario& scenario) {
  if (source_power_w < 0.0)
    throw std::domain_error("psm_mean_snr_remainder: power must be >= 0");
  if (source_power_w == 0.0) return scenario.snr_target;
  const double mean_gain = 2.0 * stats.var_h;
  const double d_out = direct_outage(source_power_w, stats.var_h, scenario);
  const double value = scenario.snr_target -
                       source_power_w * mean_gain / scenario.noise_power_w * d_out;
  return std::max(0.0, value);
}

double psm_expected_total(double source_power_w, double gamma, const ChannelStatistics& stats,
                          const NetworkScenario& scenario) {
  const double snr_eff = psm_mean_snr_remainder(source_power_w, stats, scenario);
  if (snr_eff == 0.0 || stats.relay_count() == 0) return source_power_w;
  if (gamma == 0.0) return kInf;  // every reliable relay forwards; mean power diverges
  double relay_term = 0.0;
  for (int i = 0; i < stats.relay_count(); ++i) {
    const double a = reliability_prob(source_power_w, stats.var_f[i], scenario);
    relay_term +=
        a * expected_relay_power(gamma, stats.var_g[i], snr_eff, scenario.noise_power_w);
  }
  return source_power_w + relay_term;
}

std::optional<PsmParams> psm_pick_params(const ChannelStatistics& stats, double rho_target,
                                         const PsmGridSpec& grid,
                                         const NetworkScenario& scenario) {
  check_rho(rho_target);
  if (!(grid.max_source_power_w > 0.0) || grid.points < 1)
    throw std::invalid_argument("psm_pick_params: bad grid spec");

  // Outage floor at gamma = 0: every reliable relay forwards.
  const auto floor_gap = [&](double ps) {
    double prod = 1.0;
    for (int i = 0; i < stats.relay_count(); ++i)
      prod *= 1.0 - reliability_prob(ps, stats.var_f[i], scenario);
    return prod * direct_outage(ps, stats.var_h, scenario) - rho_target;
  };

  if (floor_gap(grid.max_source_power_w) > 0.0) return std::nullopt;

  double lo = grid.max_source_power_w;
  while (floor_gap(lo) <= 0.0) {
    lo *= 0.1;
    if (lo < 1e-300) break;
  }
  double ps_min = grid.max_source_power_w;
  if (floor_gap(lo) > 0.0)
    ps_min = bisect(floor_gap, lo, grid.max_source_power_w, Tolerance{1e-12, 0.0, 200});

  const auto gamma_for = [&](double ps) -> double {
    // Largest threshold keeping the outage at or under target; conservative
    // side of the bisection so the constraint is never violated.
    if (direct_outage(ps, stats.var_h, scenario) <= rho_target) return kInf;
    if (psm_outage(ps, 0.0, stats, scenario) > rho_target) return 0.0;
    double glo = 0.0;
    double ghi = 2.0 * *std::max_element(stats.var_g.begin(), stats.var_g.end());
    int expand = 0;
    while (psm_outage(ps, ghi, stats, scenario) <= rho_target && expand++ < 2000) ghi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (glo + ghi);
      if (psm_outage(ps, mid, stats, scenario) <= rho_target)
        glo = mid;
      else
        ghi = mid;
      if (ghi - glo <= 1e-12 * ghi) break;
    }
    return glo;
  };

  std::optional<PsmParams> best;
  double best_total = kInf;
  const int points = ps_min < grid.max_source_power_w ? std::max(grid.points, 2) : 1;
  for (int k = 0; k < points; ++k) {
    const double frac = points == 1 ? 1.0 : static_cast<double>(k) / (points - 1);
    const double ps = ps_min * std::pow(grid.max_source_power_w / ps_min, frac);
    const double gamma = gamma_for(ps);
    if (gamma == 0.0) continue;
    const double total = psm_expected_total(ps, gamma, stats, scenario);
    if (total < best_total) {
      best_total = total;
      best = PsmParams{ps, gamma};
    }
  }
  return best;
}

double psm_wrong_forwarding_prob(int relay_index, double x, double source_power_w,
                                 const ChannelStatistics& stats,
                                 const NetworkScenario& scenario) {
  const int n = stats.relay_count();
  if (relay_index < 0 || relay_index >= n)
    throw std::out_of_range("psm_wrong_forwarding_prob: relay index");
  if (x < 0.0) throw std::domain_error("psm_wrong_forwarding_prob: x must be >= 0");
  const double a_i = reliability_prob(source_power_w, stats.var_f[relay_index], scenario);
  // 1 - prod_j (1 - c_j) evaluated in log space; the direct product loses all
  // precision once the c_j drop below 1e-16 and turns the tail into steps.
  double log_prod = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == relay_index) continue;
    const double a_j = reliability_prob(source_power_w, stats.var_f[j], scenario);
    log_prod += std::log1p(-a_j * std::exp(-x / (2.0 * stats.var_g[j])));
  }
  return a_i * -std::expm1(log_prod);
}

double psm_expected_waste(double source_power_w, double gamma, const ChannelStatistics& stats,
                          const NetworkScenario& scenario) {
  const int n = stats.relay_count();
  if (n <= 1) return 0.0;
  const double snr_eff = psm_mean_snr_remainder(source_power_w, stats, scenario);
  if (snr_eff == 0.0) return 0.0;
  if (!(gamma > 0.0))
    throw std::domain_error("psm_expected_waste: diverges at gamma = 0");
  if (std::isinf(gamma)) return 0.0;

  double waste = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mean_gain = 2.0 * stats.var_g[i];
    const auto integrand = [&, i](double x) {
      const double density = std::exp(-x / mean_gain) / mean_gain;
      return psm_wrong_forwarding_prob(i, x, source_power_w, stats, scenario) *
             (snr_eff * scenario.noise_power_w / x) * density;
    };
    waste += integrate_tail(integrand, gamma);
  }
  return waste;
}

AllocationDecision srm_allocate(std::span<const double> f_sq, double h_sq,
                                std::span<const double> var_g, double rho_target,
                                const NetworkScenario& scenario) {
  check_rho(rho_target);
  if (f_sq.size() != var_g.size())
    throw std::invalid_argument("srm_allocate: f_sq and var_g sizes differ");

  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;
  const double tau_norm = -2.0 * std::log1p(-rho_target);
  const double k_tau = k_of_tau(tau_norm);

  int best = -1;
  double best_total = kInf;
  double best_snr_rem = 0.0;
  for (std::size_t k = 0; k < f_sq.size(); ++k) {
    if (!(h_sq < 2.0 * var_g[k] / k_tau)) continue;  // relaying cannot beat the direct hop
    if (!(f_sq[k] > 0.0)) continue;
    const double ps = t * n0 / f_sq[k];
    const double snr_rem = snr_remainder(ps, h_sq, scenario);
    const double total = ps + snr_rem * n0 * k_tau / (2.0 * var_g[k]);
    if (total < best_total) {
      best_total = total;
      best = static_cast<int>(k);
      best_snr_rem = snr_rem;
    }
  }

  const double direct_total = h_sq > 0.0 ? t * n0 / h_sq : kInf;
  AllocationDecision d;
  d.strategy = StrategyKind::Srm;
  if (best < 0 || best_total > direct_total) {
    if (!(h_sq > 0.0)) throw InfeasibleError("srm_allocate: no feasible relay and no direct link");
    d.mode = DecisionMode::DirectOnly;
    d.source_power_w = direct_total;
    d.expected_total_w = direct_total;
    return d;
  }
  d.mode = DecisionMode::DesignatedRelay;
  d.designated_relay = best;
  d.source_power_w = t * n0 / f_sq[best];
  d.threshold = var_g[best] * tau_norm;  // tau_k = -2 var_g ln(1 - rho)
  d.snr_remainder = best_snr_rem;
  d.expected_total_w = best_total;
  return d;
}

AllocationDecision rrs_allocate(std::span<const double> f_sq, double h_sq,
                                std::span<const double> var_g, double rho_target,
                                RandomStream& stream, const NetworkScenario& scenario) {
  check_rho(rho_target);
  if (f_sq.empty()) throw std::domain_error("rrs_allocate: no relays to select from");
  if (f_sq.size() != var_g.size())
    throw std::invalid_argument("rrs_allocate: f_sq and var_g sizes differ");

  const int k = static_cast<int>(stream.uniform_index(f_sq.size()));
  if (!(f_sq[k] > 0.0)) throw InfeasibleError("rrs_allocate: selected relay has zero gain");

  const double t = scenario.snr_target;
  const double n0 = scenario.noise_power_w;
  const double tau_norm = -2.0 * std::log1p(-rho_target);

  AllocationDecision d;
  d.strategy = StrategyKind::Rrs;
  d.mode = DecisionMode::DesignatedRelay;
  d.designated_relay = k;
  d.source_power_w = t * n0 / f_sq[k];
  d.threshold = var_g[k] * tau_norm;
  d.snr_remainder = snr_remainder(d.source_power_w, h_sq, scenario);
  d.expected_total_w =
      d.source_power_w + d.snr_remainder * n0 * k_of_tau(tau_norm) / (2.0 * var_g[k]);
  return d;
}

AllocationDecision direct_allocate(double h_sq, const NetworkScenario& scenario) {
  if (!(h_sq > 0.0)) throw InfeasibleError("direct_allocate: direct link has zero gain");
  AllocationDecision d;
  d.strategy = StrategyKind::Direct;
  d.mode = DecisionMode::DirectOnly;
  d.source_power_w = scenario.snr_target * scenario.noise_power_w / h_sq;
  d.expected_total_w = d.source_power_w;
  return d;
}

}  // namespace relaysim
