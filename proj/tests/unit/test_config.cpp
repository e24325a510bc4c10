#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relaysim/config.hpp"
#include "relaysim/experiment.hpp"

using namespace relaysim;

TEST_SUITE_BEGIN("config");

TEST_CASE("a bare trials line yields the default experiment scenario") {
  const ExperimentConfig cfg = parse_config_text("[run]\ntrials = 1000\n", "<test>");
  cfg.validate();
  CHECK(cfg.run.trials == 1000);
  const NetworkScenario sc = cfg.materialize_scenario();
  CHECK(sc.relay_count() == 15);
  CHECK(sc.noise_power_w == 1e-10);
  CHECK(sc.snr_target == 10.0);
  CHECK(sc.alpha == 3.0);
  CHECK(distance(sc.source_pos, sc.dest_pos) == doctest::Approx(100.0));
  for (const Point2& p : sc.relay_positions) {
    CHECK(p.x >= -25.0);
    CHECK(p.x <= 25.0);
    CHECK(p.y >= -25.0);
    CHECK(p.y <= 25.0);
  }
}

TEST_CASE("an empty run block fails validation naming the missing field") {
  const ExperimentConfig cfg = parse_config_text("[run]\n", "<test>");
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.trials") != std::string::npos);
  }
}

TEST_CASE("out-of-range outage targets are rejected") {
  ExperimentConfig cfg = parse_config_text("[run]\ntrials = 10\nrho_targets = 1.5\n", "<test>");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config_text("[run]\ntrials = 10\nrho_targets = 0\n", "<test>");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("parse errors carry the origin and line number") {
  try {
    parse_config_text("[scenario]\nalpha = 3\nbogus_key = 1\n", "conf.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("conf.ini:3") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("alpha = 3\n", "x"), ConfigError);       // no section
  CHECK_THROWS_AS(parse_config_text("[weird]\na = 1\n", "x"), ConfigError);  // bad section
  CHECK_THROWS_AS(parse_config_text("[run]\ntrials\n", "x"), ConfigError);   // no '='
  CHECK_THROWS_AS(parse_config_text("[run]\ntrials = ten\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nstrategies = odpa, bogus\n", "x"), ConfigError);
}

TEST_CASE("explicit relay coordinates replace the box") {
  const ExperimentConfig cfg = parse_config_text(
      "[scenario]\nrelay = 30 5\nrelay = 60 -10\n[run]\ntrials = 10\n", "<test>");
  cfg.validate();
  const NetworkScenario sc = cfg.materialize_scenario();
  REQUIRE(sc.relay_count() == 2);
  CHECK(sc.relay_positions[0] == Point2{30.0, 5.0});
  CHECK(sc.relay_positions[1] == Point2{60.0, -10.0});
  CHECK_FALSE(cfg.scenario.relay_box.has_value());
}

TEST_CASE("mixing explicit relays with box settings is rejected") {
  CHECK_THROWS_AS(
      parse_config_text("[scenario]\nrelay = 30 5\nrelay_count = 4\n", "<test>"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("[scenario]\nrelay_count = 4\nrelay = 30 5\n", "<test>"),
      ConfigError);
}

TEST_CASE("psm parameters must come as a pair") {
  ExperimentConfig cfg =
      parse_config_text("[run]\ntrials = 10\npsm_source_power_w = 0.15\n", "<test>");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config_text(
      "[run]\ntrials = 10\npsm_source_power_w = 0.15\npsm_gamma = 1e-9\n", "<test>");
  cfg.validate();
  REQUIRE(cfg.run.psm_fixed.has_value());
  CHECK(cfg.run.psm_fixed->source_power_w == 0.15);
  CHECK(cfg.run.psm_fixed->gamma == 1e-9);
}

TEST_CASE("write and reload round-trips the configuration") {
  SUBCASE("default box config") {
    ExperimentConfig cfg;
    cfg.run.trials = 1234;
    const ExperimentConfig loaded = parse_config_text(write_config(cfg), "<roundtrip>");
    CHECK(loaded == cfg);
  }
  SUBCASE("fully customized config") {
    ExperimentConfig cfg;
    cfg.scenario.source = {1.5, -2.25};
    cfg.scenario.dest = {97.0, 3.125};
    cfg.scenario.relay_box.reset();
    cfg.scenario.relays = {{30.1, 4.7}, {61.3, -9.9}, {45.0, 0.5}};
    cfg.scenario.alpha = 2.7;
    cfg.scenario.wavelength_m = 0.125;
    cfg.scenario.noise_power_w = 3e-11;
    cfg.scenario.snr_target = 12.5;
    cfg.run.strategies = {StrategyKind::Direct, StrategyKind::Ocpa, StrategyKind::Psm};
    cfg.run.rho_targets = {0.03, 0.07};
    cfg.run.trials = 999;
    cfg.run.master_seed = 31337;
    cfg.run.workers = 2;
    cfg.run.ocpa_p_max_w = 0.75;
    cfg.run.psm_fixed = PsmParams{0.15, 2.5e-9};
    cfg.run.psm_grid.max_source_power_w = 4.0;
    cfg.run.psm_grid.points = 17;
    cfg.run.destination_box = DestinationBox{20.0, 100.0, -50.0, 50.0};
    cfg.output.csv_path = "out/results.csv";
    cfg.output.per_trial_dump = true;
    const ExperimentConfig loaded = parse_config_text(write_config(cfg), "<roundtrip>");
    CHECK(loaded == cfg);
  }
  SUBCASE("awkward doubles survive the text form") {
    ExperimentConfig cfg;
    cfg.run.trials = 1;
    cfg.scenario.alpha = std::nextafter(3.0, 4.0);
    cfg.run.rho_targets = {0.1 + 1e-17, 1.0 / 3.0};
    const ExperimentConfig loaded = parse_config_text(write_config(cfg), "<roundtrip>");
    CHECK(loaded == cfg);
  }
  SUBCASE("randomized configs") {
    RandomStream gen(424242);
    const StrategyKind all[] = {StrategyKind::Direct, StrategyKind::Ocpa, StrategyKind::Odpa,
                                StrategyKind::Psm,    StrategyKind::Srm,  StrategyKind::Rrs};
    for (int rep = 0; rep < 50; ++rep) {
      ExperimentConfig cfg;
      cfg.scenario.source = {gen.uniform_range(-10, 10), gen.uniform_range(-10, 10)};
      cfg.scenario.dest = {gen.uniform_range(80, 120), gen.uniform_range(-10, 10)};
      if (gen.uniform01() < 0.5) {
        cfg.scenario.relay_box.reset();
        const int n = 1 + static_cast<int>(gen.uniform_index(5));
        for (int i = 0; i < n; ++i)
          cfg.scenario.relays.push_back(
              {gen.uniform_range(20, 80), gen.uniform_range(-30, 30)});
      } else {
        cfg.scenario.relay_box->count = 1 + static_cast<int>(gen.uniform_index(20));
        cfg.scenario.relay_box->placement_seed = gen.uniform_index(1u << 30);
      }
      cfg.scenario.alpha = gen.uniform_range(2.0, 4.0);
      cfg.scenario.noise_power_w = std::pow(10.0, gen.uniform_range(-12.0, -8.0));
      cfg.run.strategies = {all[gen.uniform_index(6)], all[gen.uniform_index(6)]};
      cfg.run.rho_targets = {gen.uniform_range(0.001, 0.5)};
      cfg.run.trials = 1 + static_cast<int>(gen.uniform_index(100000));
      cfg.run.master_seed = gen.uniform_index(1u << 30);
      cfg.run.workers = static_cast<int>(gen.uniform_index(8));
      if (gen.uniform01() < 0.3)
        cfg.run.psm_fixed = PsmParams{gen.uniform_range(0.01, 2.0), gen.uniform_range(1e-10, 1e-8)};
      if (gen.uniform01() < 0.3)
        cfg.run.ocpa_p_max_w = gen.uniform_range(0.1, 5.0);
      if (gen.uniform01() < 0.3)
        cfg.run.destination_box = DestinationBox{20, 100, -50, 50};
      cfg.output.per_trial_dump = gen.uniform01() < 0.5;
      cfg.validate();
      const ExperimentConfig loaded = parse_config_text(write_config(cfg), "<roundtrip>");
      CHECK(loaded == cfg);
    }
  }
}

TEST_CASE("overrides win over file values") {
  ExperimentConfig cfg = parse_config_text("[run]\ntrials = 10\n", "<test>");
  apply_override(cfg, "run.trials=555");
  apply_override(cfg, "scenario.alpha=2.5");
  apply_override(cfg, "output.csv=elsewhere.csv");
  apply_override(cfg, "run.rho_targets=0.05,0.1");
  CHECK(cfg.run.trials == 555);
  CHECK(cfg.scenario.alpha == 2.5);
  CHECK(cfg.output.csv_path == "elsewhere.csv");
  CHECK(cfg.run.rho_targets == std::vector<double>{0.05, 0.1});

  CHECK_THROWS_AS(apply_override(cfg, "run.trials"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trials=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "run.nope=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "scenario.relay=1 2"), ConfigError);
}

TEST_CASE("results csv schema is pinned") {
  CHECK(std::string(kResultsCsvHeader) ==
        "strategy,rho_target,rho_empirical,rho_ci95,mean_total_power_w,power_ci95_w,"
        "mean_source_power_w,mean_relay_power_w,fallback_rate,trials,master_seed");
}

TEST_CASE("tiny experiment end to end") {
  ExperimentConfig cfg;
  cfg.scenario.relay_box->count = 4;
  cfg.run.strategies = {StrategyKind::Direct, StrategyKind::Srm};
  cfg.run.rho_targets = {0.1, 0.05};
  cfg.run.trials = 400;
  cfg.run.workers = 1;

  const ExperimentResult result = run_experiment(cfg);
  REQUIRE(result.rows.size() == 4);

  // rho ascending within each strategy block
  CHECK(result.rows[0].rho_target == 0.05);
  CHECK(result.rows[1].rho_target == 0.1);
  CHECK(result.rows[0].strategy == StrategyKind::Direct);
  CHECK(result.rows[2].strategy == StrategyKind::Srm);

  for (const SweepResult& r : result.rows) {
    if (r.strategy != StrategyKind::Direct) continue;
    CHECK(r.outage_rate == 0.0);
    CHECK(r.fallback_rate == 0.0);
  }

  std::ostringstream a, b;
  write_results_csv(result.rows, a);
  const ExperimentResult result2 = run_experiment(cfg);
  write_results_csv(result2.rows, b);
  CHECK(a.str() == b.str());  // identical inputs, identical bytes

  std::ostringstream curve;
  emit_curve_data(result.rows, curve);
  std::istringstream lines(curve.str());
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  CHECK(line == "strategy,rho_target,rho_empirical,mean_total_power_w");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("curve data keeps one row per strategy and target") {
  std::vector<SweepResult> rows;
  const StrategyKind kinds[3] = {StrategyKind::Odpa, StrategyKind::Srm, StrategyKind::Rrs};
  const double rhos[5] = {0.01, 0.02, 0.05, 0.1, 0.2};
  for (StrategyKind k : kinds)
    for (double rho : rhos) {
      SweepResult r;
      r.strategy = k;
      r.rho_target = rho;
      rows.push_back(r);
    }
  std::ostringstream out;
  emit_curve_data(rows, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  int count = 0;
  double prev_rho = 0.0;
  std::string prev_strategy;
  while (std::getline(lines, line)) {
    ++count;
    const std::string strategy = line.substr(0, line.find(','));
    if (strategy == prev_strategy) {
      const double rho = std::stod(line.substr(line.find(',') + 1));
      CHECK(rho > prev_rho);
      prev_rho = rho;
    } else {
      prev_strategy = strategy;
      prev_rho = 0.0;
    }
  }
  CHECK(count == 15);
}

TEST_CASE("experiment writes primary, curve and per-trial files") {
  ExperimentConfig cfg;
  cfg.scenario.relay_box->count = 3;
  cfg.run.strategies = {StrategyKind::Srm, StrategyKind::Direct};
  cfg.run.rho_targets = {0.1, 0.05};
  cfg.run.trials = 50;
  cfg.run.workers = 1;
  cfg.output.csv_path = "config_suite_files.csv";
  cfg.output.per_trial_dump = true;

  std::ostringstream log;
  run_experiment_to_files(cfg, log);

  const auto count_lines = [](const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    int n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
  };
  CHECK(count_lines(cfg.output.csv_path) == 1 + 4);          // header + rows
  CHECK(count_lines(cfg.output.csv_path + ".curve.csv") == 1 + 4);
  CHECK(count_lines(cfg.output.csv_path + ".trials.csv") == 1 + 2 * 2 * 50);
  std::remove(cfg.output.csv_path.c_str());
  std::remove((cfg.output.csv_path + ".curve.csv").c_str());
  std::remove((cfg.output.csv_path + ".trials.csv").c_str());
}

TEST_CASE("curve data is sorted and mirrors the primary values") {
  SweepResult r1, r2, r3;
  r1.strategy = StrategyKind::Srm;
  r1.rho_target = 0.1;
  r1.mean_total_power_w = 1.5;
  r2.strategy = StrategyKind::Odpa;
  r2.rho_target = 0.2;
  r2.mean_total_power_w = 2.5;
  r3.strategy = StrategyKind::Odpa;
  r3.rho_target = 0.1;
  r3.mean_total_power_w = 3.5;
  std::ostringstream out;
  emit_curve_data({r1, r2, r3}, out);
  const std::string text = out.str();
  const auto odpa1 = text.find("odpa,0.1");
  const auto odpa2 = text.find("odpa,0.2");
  const auto srm = text.find("srm,0.1");
  REQUIRE(odpa1 != std::string::npos);
  REQUIRE(odpa2 != std::string::npos);
  REQUIRE(srm != std::string::npos);
  CHECK(odpa1 < odpa2);
  CHECK(odpa2 < srm);
  CHECK(text.find("3.5") != std::string::npos);
}

TEST_SUITE_END();
