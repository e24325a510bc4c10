#include <doctest.h>

#include <cmath>
#include <vector>

#include "relaysim/analytics.hpp"
#include "relaysim/montecarlo.hpp"
#include "relaysim/numerics.hpp"

using namespace relaysim;

namespace {

NetworkScenario unit_noise_scenario() {
  NetworkScenario sc;
  sc.noise_power_w = 1.0;
  sc.snr_target = 10.0;
  return sc;
}

ChannelStatistics make_stats(std::vector<double> var_f, std::vector<double> var_g,
                             double var_h) {
  ChannelStatistics stats;
  stats.var_f = std::move(var_f);
  stats.var_g = std::move(var_g);
  stats.var_h = var_h;
  return stats;
}

bool same_outcome(const TrialOutcome& a, const TrialOutcome& b) {
  return a.source_power_w == b.source_power_w &&
         a.relay_power_total_w == b.relay_power_total_w &&
         a.forwarding_count == b.forwarding_count &&
         a.destination_snr == b.destination_snr && a.outage == b.outage &&
         a.fallback == b.fallback && a.infeasible == b.infeasible && a.capped == b.capped;
}

}  // namespace

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("direct strategy never sees an outage") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({1.0, 0.5}, {0.8, 0.9}, 0.4);
  StrategySpec spec;
  spec.kind = StrategyKind::Direct;
  SweepOptions opts;
  opts.trials = 5000;
  opts.master_seed = 11;
  const auto outcomes = run_trials(spec, sc, stats, 0.05, opts);
  for (const TrialOutcome& o : outcomes) {
    CHECK_FALSE(o.outage);
    CHECK(o.forwarding_count == 0);
    CHECK_FALSE(o.fallback);
    CHECK(o.relay_power_total_w == 0.0);
  }
}

TEST_CASE("outage flag always mirrors the destination SNR") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5}, {0.7, 1.1}, 0.05);
  StrategySpec spec;
  spec.kind = StrategyKind::Psm;
  spec.psm = PsmParams{2.0, 0.6};
  SweepOptions opts;
  opts.trials = 20000;
  opts.master_seed = 3;
  for (const TrialOutcome& o : run_trials(spec, sc, stats, 0.1, opts))
    CHECK(o.outage == !meets_snr(o.destination_snr, sc.snr_target));
}

TEST_CASE("trial results do not depend on the worker count") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5, 0.4}, {0.7, 1.1, 0.5}, 0.1);
  for (StrategyKind kind : {StrategyKind::Odpa, StrategyKind::Srm, StrategyKind::Rrs}) {
    StrategySpec spec;
    spec.kind = kind;
    SweepOptions a, b;
    a.trials = b.trials = 4000;
    a.master_seed = b.master_seed = 77;
    a.workers = 1;
    b.workers = 3;
    const auto ra = run_trials(spec, sc, stats, 0.05, a);
    const auto rb = run_trials(spec, sc, stats, 0.05, b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(same_outcome(ra[i], rb[i]));
  }
}

TEST_CASE("power accounting identity holds bit-exactly") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5}, {0.7, 1.1}, 0.1);
  StrategySpec spec;
  spec.kind = StrategyKind::Odpa;
  SweepOptions opts;
  opts.trials = 3000;
  opts.master_seed = 5;
  const auto outcomes = run_trials(spec, sc, stats, 0.1, opts);
  const SweepResult r = aggregate_trials(spec.kind, 0.1, outcomes, opts.master_seed);
  CHECK(r.mean_total_power_w == r.mean_source_power_w + r.mean_relay_power_w);
}

TEST_CASE("confidence interval shrinks like one over root trials") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5}, {0.7, 1.1}, 0.05);
  StrategySpec spec;
  spec.kind = StrategyKind::Psm;
  spec.psm = PsmParams{2.0, 0.6};

  SweepOptions small, large;
  small.trials = 1000;
  large.trials = 16000;
  small.master_seed = large.master_seed = 21;
  const SweepResult rs = aggregate_trials(
      spec.kind, 0.1, run_trials(spec, sc, stats, 0.1, small), small.master_seed);
  const SweepResult rl = aggregate_trials(
      spec.kind, 0.1, run_trials(spec, sc, stats, 0.1, large), large.master_seed);
  const double ratio = rs.power_ci95_w / rl.power_ci95_w;
  CHECK(ratio > 2.4);  // ideal is 4
  CHECK(ratio < 6.6);
}

TEST_CASE("srm empirical outage and forwarding rate match the construction") {
  const NetworkScenario sc = unit_noise_scenario();
  // Weak direct link keeps the SNR remainder positive in essentially every
  // trial, so the designated relay forwards with probability 1 - rho.
  const ChannelStatistics stats = make_stats({1.2, 0.8, 1.7}, {0.9, 1.3, 0.6}, 1e-4);
  const double rho = 0.1;
  StrategySpec spec;
  spec.kind = StrategyKind::Srm;
  SweepOptions opts;
  opts.trials = 100000;
  opts.master_seed = 2718;
  const auto outcomes = run_trials(spec, sc, stats, rho, opts);

  int eligible = 0, forwarded = 0, outages = 0;
  for (const TrialOutcome& o : outcomes) {
    if (o.fallback || o.infeasible) continue;
    ++eligible;
    forwarded += o.forwarding_count > 0 ? 1 : 0;
    outages += o.outage ? 1 : 0;
  }
  REQUIRE(eligible > opts.trials / 2);
  const double p = 1.0 - rho;
  const double se = std::sqrt(p * (1.0 - p) / eligible);
  CHECK(std::fabs(static_cast<double>(forwarded) / eligible - p) < 3.0 * se);
  CHECK(std::fabs(static_cast<double>(outages) / eligible - rho) < 3.0 * se);
}

TEST_CASE("psm empirical outage matches the closed form") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({1.4, 0.9}, {0.8, 1.2}, 0.3);
  const double ps = 3.0, gamma = 0.7;
  StrategySpec spec;
  spec.kind = StrategyKind::Psm;
  spec.psm = PsmParams{ps, gamma};
  SweepOptions opts;
  opts.trials = 100000;
  opts.master_seed = 1618;
  const SweepResult r = aggregate_trials(
      spec.kind, 0.1, run_trials(spec, sc, stats, 0.1, opts), opts.master_seed);
  const double predicted = psm_outage(ps, gamma, stats, sc);
  const double se = std::sqrt(predicted * (1.0 - predicted) / opts.trials);
  CHECK(std::fabs(r.outage_rate - predicted) < 3.0 * se);
}

TEST_CASE("psm empirical relay power matches the expectation chain") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({2.0, 2.0}, {0.6, 0.6}, 0.05);
  const double ps = 2.0, gamma = 0.5;
  StrategySpec spec;
  spec.kind = StrategyKind::Psm;
  spec.psm = PsmParams{ps, gamma};
  SweepOptions opts;
  opts.trials = 100000;
  opts.master_seed = 31415;
  const auto outcomes = run_trials(spec, sc, stats, 0.1, opts);

  double sum = 0.0, sum_sq = 0.0;
  for (const TrialOutcome& o : outcomes) {
    sum += o.relay_power_total_w;
    sum_sq += o.relay_power_total_w * o.relay_power_total_w;
  }
  const double mean = sum / opts.trials;
  const double var = (sum_sq - sum * sum / opts.trials) / (opts.trials - 1);
  const double se = std::sqrt(var / opts.trials);

  const double snr_eff = psm_mean_snr_remainder(ps, stats, sc);
  double predicted = 0.0;
  for (int i = 0; i < stats.relay_count(); ++i) {
    const double a_i = std::exp(-sc.snr_target / (ps * 2.0 * stats.var_f[i]));
    predicted +=
        a_i * expected_relay_power(gamma, stats.var_g[i], snr_eff, sc.noise_power_w);
  }
  CHECK(std::fabs(mean - predicted) < 3.0 * se);
}

TEST_CASE("odpa keeps the empirical outage at or under the target") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5, 0.5}, {0.7, 1.1, 0.6}, 0.02);
  StrategySpec spec;
  spec.kind = StrategyKind::Odpa;
  SweepOptions opts;
  opts.trials = 100000;
  opts.master_seed = 808;
  for (double rho : {0.05, 0.2}) {
    const SweepResult r = aggregate_trials(
        spec.kind, rho, run_trials(spec, sc, stats, rho, opts), opts.master_seed);
    const double se = std::sqrt(rho * (1.0 - rho) / opts.trials);
    CHECK(r.outage_rate <= rho + 3.0 * se);
  }
}

TEST_CASE("odpa trials that pick the direct candidate keep every relay silent") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.3, 0.4}, {0.3, 0.2}, 2.0);
  StrategySpec spec;
  spec.kind = StrategyKind::Odpa;
  SweepOptions opts;
  opts.trials = 20000;
  opts.master_seed = 99;
  int direct_wins = 0;
  for (const TrialOutcome& o : run_trials(spec, sc, stats, 0.1, opts)) {
    if (!o.fallback) continue;
    ++direct_wins;
    CHECK(o.forwarding_count == 0);
    CHECK(o.relay_power_total_w == 0.0);
    CHECK_FALSE(o.outage);
  }
  CHECK(direct_wins > 0);
}

TEST_CASE("odpa per-draw expected total is non-increasing in the outage target") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5, 0.5}, {0.7, 1.1, 0.6}, 0.05);
  RandomStream stream(1001);
  for (int rep = 0; rep < 300; ++rep) {
    const ChannelRealization real = draw_realization(stats, stream);
    double prev = std::numeric_limits<double>::infinity();
    for (double rho : {0.01, 0.05, 0.1, 0.3}) {
      const AllocationDecision d =
          odpa_allocate(real.f_sq, real.h_sq, stats.var_g, rho, sc);
      CHECK(d.expected_total_w <= prev * (1.0 + 1e-12));
      prev = d.expected_total_w;
    }
  }
}

TEST_CASE("ocpa trials stay outage-free uncapped and record cap violations") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5}, {0.7, 1.1}, 0.1);
  StrategySpec spec;
  spec.kind = StrategyKind::Ocpa;
  SweepOptions opts;
  opts.trials = 20000;
  opts.master_seed = 2;

  for (const TrialOutcome& o : run_trials(spec, sc, stats, 0.05, opts)) {
    CHECK_FALSE(o.outage);
    CHECK_FALSE(o.capped);
  }

  spec.ocpa_power_cap_w = 1e-6;  // far below any feasible compensation
  for (const TrialOutcome& o : run_trials(spec, sc, stats, 0.05, opts)) {
    CHECK(o.capped);
    CHECK(o.outage);
    CHECK(o.total_power_w() == 0.0);
  }
}

TEST_CASE("ocpa capped outage rate responds to the cap level") {
  const NetworkScenario sc = unit_noise_scenario();
  const ChannelStatistics stats = make_stats({0.9, 1.5}, {0.7, 1.1}, 0.1);
  StrategySpec loose, tight;
  loose.kind = tight.kind = StrategyKind::Ocpa;
  loose.ocpa_power_cap_w = 200.0;
  tight.ocpa_power_cap_w = 10.0;
  SweepOptions opts;
  opts.trials = 20000;
  opts.master_seed = 6;
  const SweepResult rl = aggregate_trials(
      StrategyKind::Ocpa, 0.05, run_trials(loose, sc, stats, 0.05, opts), opts.master_seed);
  const SweepResult rt = aggregate_trials(
      StrategyKind::Ocpa, 0.05, run_trials(tight, sc, stats, 0.05, opts), opts.master_seed);
  CHECK(rl.outage_rate < rt.outage_rate);
  CHECK(rt.outage_rate > 0.0);
}

TEST_CASE("randomized destination stays deterministic per seed") {
  NetworkScenario sc;  // physical-units scenario with real geometry
  sc.relay_positions = place_relays_in_box(25.0, 75.0, -25.0, 25.0, 6, 9);
  const ChannelStatistics stats = build_statistics(sc);
  StrategySpec spec;
  spec.kind = StrategyKind::Odpa;
  SweepOptions a, b;
  a.trials = b.trials = 2000;
  a.master_seed = b.master_seed = 44;
  a.workers = 1;
  b.workers = 2;
  a.trial.randomized_destination = DestinationBox{20.0, 100.0, -50.0, 50.0};
  b.trial.randomized_destination = a.trial.randomized_destination;
  const auto ra = run_trials(spec, sc, stats, 0.05, a);
  const auto rb = run_trials(spec, sc, stats, 0.05, b);
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(same_outcome(ra[i], rb[i]));
}

TEST_CASE("brute-force source-power grid never beats the discrete optimum") {
  const NetworkScenario sc = unit_noise_scenario();
  RandomStream stream(13);
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<double> f, vg;
    for (int i = 0; i < 3; ++i) {
      f.push_back(stream.exponential(1.0));
      vg.push_back(0.1 + 1.5 * stream.uniform01());
    }
    const double h = stream.exponential(0.3);
    const AllocationDecision d = odpa_allocate(f, h, vg, 0.05, sc);
    const GridOptimum grid = source_power_grid_oracle(f, h, vg, 0.05, 500, sc);
    CHECK(grid.expected_total_w >= d.expected_total_w * (1.0 - 0.005));
  }
}

TEST_CASE("expected total grows with source power when the derivative is positive") {
  const NetworkScenario sc = unit_noise_scenario();
  // Between the two candidates the reliable set is fixed to relay 0, the
  // threshold is fixed, and the slope 1 - |h|^2 / g_eff^2 is positive.
  const std::vector<double> vg{0.5};
  const double h = 0.5;
  const double rho = 0.1;
  const double gamma = solve_threshold(vg, rho);
  const double slope = 1.0 - h / effective_gain(gamma, vg);
  REQUIRE(slope > 0.0);
  double prev = 0.0;
  for (double ps : {5.5, 6.5, 7.5, 8.5, 9.5}) {
    const double snr_rem = sc.snr_target - ps * h;
    double total = ps;
    for (double v : vg) total += expected_relay_power(gamma, v, snr_rem, 1.0);
    CHECK(total > prev);
    prev = total;
  }
}

TEST_CASE("grid containing a candidate reproduces its expected total") {
  const NetworkScenario sc = unit_noise_scenario();
  const std::vector<double> f{2.0};
  const std::vector<double> vg{0.5};
  const double h = 0.5;
  // Two grid points: the single relay candidate and the direct candidate.
  const GridOptimum grid = source_power_grid_oracle(f, h, vg, 0.1, 2, sc);
  const AllocationDecision d = odpa_allocate(f, h, vg, 0.1, sc);
  CHECK(grid.expected_total_w == doctest::Approx(d.expected_total_w).epsilon(1e-12));
  CHECK(grid.source_power_w == d.source_power_w);
}

TEST_CASE("ocpa matches the exhaustive quantized oracle") {
  const NetworkScenario sc = unit_noise_scenario();
  RandomStream stream(808017);
  for (int rep = 0; rep < 25; ++rep) {
    ChannelRealization real;
    for (int i = 0; i < 2; ++i) {
      real.f_sq.push_back(stream.exponential(1.5));
      real.g_sq.push_back(stream.exponential(1.0));
    }
    real.h_sq = stream.exponential(0.5);
    const AllocationDecision d = ocpa_allocate(real, sc);
    const OcpaOracleResult oracle = ocpa_exhaustive_oracle(real, sc, 4000);
    CHECK(d.expected_total_w <= oracle.total_power_w * (1.0 + 1e-9));
    CHECK(oracle.total_power_w <= d.expected_total_w + oracle.step_w * (1.0 + 1e-9));
  }
}

TEST_CASE("oracle returns the direct power when the direct link dominates") {
  const NetworkScenario sc = unit_noise_scenario();
  ChannelRealization real;
  real.f_sq = {0.2, 0.1};
  real.g_sq = {0.3, 0.1};
  real.h_sq = 4.0;
  const OcpaOracleResult oracle = ocpa_exhaustive_oracle(real, sc, 2000);
  CHECK(oracle.total_power_w == doctest::Approx(10.0 / 4.0).epsilon(1e-9));
}

TEST_CASE("oracle rejects the all-zero realization") {
  const NetworkScenario sc = unit_noise_scenario();
  ChannelRealization real;
  real.f_sq = {0.0};
  real.g_sq = {0.0};
  real.h_sq = 0.0;
  CHECK_THROWS(ocpa_exhaustive_oracle(real, sc, 100));
}

TEST_CASE("allocator errors inside workers surface as exceptions") {
  const NetworkScenario sc = unit_noise_scenario();
  ChannelStatistics empty;  // no relays at all
  empty.var_h = 0.4;
  StrategySpec spec;
  spec.kind = StrategyKind::Rrs;
  SweepOptions opts;
  opts.trials = 64;
  opts.workers = 3;
  CHECK_THROWS_AS(run_trials(spec, sc, empty, 0.1, opts), std::domain_error);
}

TEST_CASE("run_sweep produces one result per outage target") {
  const NetworkScenario sc = unit_noise_scenario();
  NetworkScenario geo = sc;
  geo.relay_positions = {{40.0, 5.0}, {60.0, -10.0}};
  StrategySpec spec;
  spec.kind = StrategyKind::Srm;
  SweepOptions opts;
  opts.trials = 500;
  opts.master_seed = 15;
  const std::vector<double> rhos{0.02, 0.05, 0.1};
  const auto results = run_sweep(spec, geo, rhos, opts);
  REQUIRE(results.size() == 3);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    CHECK(results[i].rho_target == rhos[i]);
    CHECK(results[i].trials == 500);
    CHECK(results[i].master_seed == 15);
    CHECK(results[i].outage_rate >= 0.0);
    CHECK(results[i].outage_rate <= 1.0);
  }
}

TEST_SUITE_END();
