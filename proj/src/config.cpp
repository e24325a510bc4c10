#include "relaysim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace relaysim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string current;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        items.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ConfigError(where + ": " + message);
}

double parse_double(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    fail(where, "expected a number, got '" + raw + "'");
  return v;
}

long long parse_int(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    fail(where, "expected an integer, got '" + raw + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (!s.empty() && s[0] == '-') fail(where, "expected a nonnegative integer, got '" + raw + "'");
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    fail(where, "expected an integer, got '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(where, "expected true/false, got '" + raw + "'");
}

std::vector<double> parse_numbers(const std::string& raw, std::size_t expect,
                                  const std::string& where) {
  const std::vector<std::string> parts = split_list(raw);
  if (expect != 0 && parts.size() != expect)
    fail(where, "expected " + std::to_string(expect) + " numbers, got '" + raw + "'");
  std::vector<double> out;
  out.reserve(parts.size());
  for (const std::string& p : parts) out.push_back(parse_double(p, where));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ParseContext {
  bool saw_explicit_relay = false;
  bool saw_box_key = false;
};

RelayBoxSpec& edit_box(ExperimentConfig& cfg, ParseContext& ctx, const std::string& where) {
  if (ctx.saw_explicit_relay)
    fail(where, "relay_box settings conflict with explicit relay coordinates");
  ctx.saw_box_key = true;
  if (!cfg.scenario.relay_box) cfg.scenario.relay_box = RelayBoxSpec{};
  return *cfg.scenario.relay_box;
}

void set_scenario_key(ExperimentConfig& cfg, ParseContext& ctx, const std::string& key,
                      const std::string& value, const std::string& where) {
  ScenarioConfig& sc = cfg.scenario;
  if (key == "source") {
    const auto v = parse_numbers(value, 2, where);
    sc.source = {v[0], v[1]};
  } else if (key == "dest") {
    const auto v = parse_numbers(value, 2, where);
    sc.dest = {v[0], v[1]};
  } else if (key == "relay") {
    if (ctx.saw_box_key) fail(where, "explicit relay coordinates conflict with relay_box");
    if (!ctx.saw_explicit_relay) {
      sc.relays.clear();
      sc.relay_box.reset();
      ctx.saw_explicit_relay = true;
    }
    const auto v = parse_numbers(value, 2, where);
    sc.relays.push_back({v[0], v[1]});
  } else if (key == "relay_box") {
    const auto v = parse_numbers(value, 4, where);
    RelayBoxSpec& box = edit_box(cfg, ctx, where);
    box.x0 = v[0];
    box.x1 = v[1];
    box.y0 = v[2];
    box.y1 = v[3];
  } else if (key == "relay_count") {
    edit_box(cfg, ctx, where).count = static_cast<int>(parse_int(value, where));
  } else if (key == "placement_seed") {
    edit_box(cfg, ctx, where).placement_seed = parse_uint(value, where);
  } else if (key == "alpha") {
    sc.alpha = parse_double(value, where);
  } else if (key == "antenna_gain_tx") {
    sc.antenna_gain_tx = parse_double(value, where);
  } else if (key == "antenna_gain_rx") {
    sc.antenna_gain_rx = parse_double(value, where);
  } else if (key == "wavelength_m") {
    sc.wavelength_m = parse_double(value, where);
  } else if (key == "system_loss") {
    sc.system_loss = parse_double(value, where);
  } else if (key == "noise_power_w") {
    sc.noise_power_w = parse_double(value, where);
  } else if (key == "snr_target") {
    sc.snr_target = parse_double(value, where);
  } else {
    fail(where, "unknown scenario key '" + key + "'");
  }
}

void set_run_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                 const std::string& where) {
  RunConfig& run = cfg.run;
  if (key == "strategies") {
    run.strategies.clear();
    for (const std::string& name : split_list(value)) {
      const auto kind = parse_strategy(name);
      if (!kind) fail(where, "unknown strategy '" + name + "'");
      run.strategies.push_back(*kind);
    }
  } else if (key == "rho_targets" || key == "rho_target") {
    run.rho_targets.clear();
    for (const std::string& item : split_list(value))
      run.rho_targets.push_back(parse_double(item, where));
  } else if (key == "trials") {
    run.trials = static_cast<int>(parse_int(value, where));
  } else if (key == "master_seed") {
    run.master_seed = parse_uint(value, where);
  } else if (key == "workers") {
    run.workers = static_cast<int>(parse_int(value, where));
  } else if (key == "ocpa_p_max_w") {
    run.ocpa_p_max_w = parse_double(value, where);
  } else if (key == "psm_source_power_w") {
    if (!run.psm_fixed) run.psm_fixed = PsmParams{std::nan(""), std::nan("")};
    run.psm_fixed->source_power_w = parse_double(value, where);
  } else if (key == "psm_gamma") {
    if (!run.psm_fixed) run.psm_fixed = PsmParams{std::nan(""), std::nan("")};
    run.psm_fixed->gamma = parse_double(value, where);
  } else if (key == "psm_grid_max_w") {
    run.psm_grid.max_source_power_w = parse_double(value, where);
  } else if (key == "psm_grid_points") {
    run.psm_grid.points = static_cast<int>(parse_int(value, where));
  } else if (key == "destination_box") {
    if (trim(value) == "none") {
      run.destination_box.reset();
    } else {
      const auto v = parse_numbers(value, 4, where);
      run.destination_box = DestinationBox{v[0], v[1], v[2], v[3]};
    }
  } else {
    fail(where, "unknown run key '" + key + "'");
  }
}

void set_output_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& where) {
  if (key == "csv") {
    cfg.output.csv_path = trim(value);
  } else if (key == "per_trial_dump") {
    cfg.output.per_trial_dump = parse_bool(value, where);
  } else {
    fail(where, "unknown output key '" + key + "'");
  }
}

void set_key(ExperimentConfig& cfg, ParseContext& ctx, const std::string& section,
             const std::string& key, const std::string& value, const std::string& where) {
  if (section == "scenario")
    set_scenario_key(cfg, ctx, key, value, where);
  else if (section == "run")
    set_run_key(cfg, key, value, where);
  else if (section == "output")
    set_output_key(cfg, key, value, where);
  else
    fail(where, "unknown section '" + section + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (run.trials < 1) problems.push_back("run.trials is required and must be >= 1");
  if (run.strategies.empty()) problems.push_back("run.strategies must not be empty");
  if (run.rho_targets.empty()) problems.push_back("run.rho_targets must not be empty");
  for (double rho : run.rho_targets)
    if (!(rho > 0.0 && rho < 1.0)) {
      problems.push_back("run.rho_targets values must lie in (0, 1)");
      break;
    }
  if (run.workers < 0) problems.push_back("run.workers must be >= 0");
  if (!(run.ocpa_p_max_w > 0.0)) problems.push_back("run.ocpa_p_max_w must be positive");
  if (run.psm_fixed) {
    if (std::isnan(run.psm_fixed->source_power_w) || std::isnan(run.psm_fixed->gamma))
      problems.push_back("psm_source_power_w and psm_gamma must be given together");
    else if (!(run.psm_fixed->source_power_w > 0.0) || !(run.psm_fixed->gamma > 0.0))
      problems.push_back("fixed PSM parameters must be positive");
  }
  if (!(run.psm_grid.max_source_power_w > 0.0) || run.psm_grid.points < 1)
    problems.push_back("run.psm_grid settings must be positive");
  if (run.destination_box) {
    const DestinationBox& b = *run.destination_box;
    if (!(b.x0 <= b.x1) || !(b.y0 <= b.y1))
      problems.push_back("run.destination_box bounds out of order");
  }
  if (scenario.relay_box) {
    const RelayBoxSpec& b = *scenario.relay_box;
    if (b.count < 0) problems.push_back("scenario.relay_count must be >= 0");
    if (!(b.x0 <= b.x1) || !(b.y0 <= b.y1))
      problems.push_back("scenario.relay_box bounds out of order");
  }
  if (!(scenario.noise_power_w > 0.0))
    problems.push_back("scenario.noise_power_w must be positive");
  if (!(scenario.snr_target > 0.0)) problems.push_back("scenario.snr_target must be positive");
  if (!(scenario.system_loss >= 1.0)) problems.push_back("scenario.system_loss must be >= 1");
  if (output.csv_path.empty()) problems.push_back("output.csv must not be empty");

  if (!problems.empty()) {
    std::string joined = "invalid configuration:";
    for (const std::string& p : problems) joined += "\n  - " + p;
    throw ConfigError(joined);
  }
}

NetworkScenario ExperimentConfig::materialize_scenario() const {
  NetworkScenario sc;
  sc.source_pos = scenario.source;
  sc.dest_pos = scenario.dest;
  sc.alpha = scenario.alpha;
  sc.antenna_gain_tx = scenario.antenna_gain_tx;
  sc.antenna_gain_rx = scenario.antenna_gain_rx;
  sc.wavelength_m = scenario.wavelength_m;
  sc.system_loss = scenario.system_loss;
  sc.noise_power_w = scenario.noise_power_w;
  sc.snr_target = scenario.snr_target;
  if (!scenario.relays.empty()) {
    sc.relay_positions = scenario.relays;
  } else if (scenario.relay_box) {
    const RelayBoxSpec& b = *scenario.relay_box;
    sc.relay_positions =
        place_relays_in_box(b.x0, b.x1, b.y0, b.y1, b.count, b.placement_seed);
  }
  try {
    sc.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return sc;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const auto box_eq = [](const std::optional<RelayBoxSpec>& x,
                         const std::optional<RelayBoxSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->x0 == y->x0 && x->x1 == y->x1 && x->y0 == y->y0 && x->y1 == y->y1 &&
           x->count == y->count && x->placement_seed == y->placement_seed;
  };
  const auto psm_eq = [](const std::optional<PsmParams>& x, const std::optional<PsmParams>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->source_power_w == y->source_power_w && x->gamma == y->gamma;
  };
  const auto dest_eq = [](const std::optional<DestinationBox>& x,
                          const std::optional<DestinationBox>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->x0 == y->x0 && x->x1 == y->x1 && x->y0 == y->y0 && x->y1 == y->y1;
  };
  return a.scenario.source == b.scenario.source && a.scenario.dest == b.scenario.dest &&
         box_eq(a.scenario.relay_box, b.scenario.relay_box) &&
         a.scenario.relays == b.scenario.relays && a.scenario.alpha == b.scenario.alpha &&
         a.scenario.antenna_gain_tx == b.scenario.antenna_gain_tx &&
         a.scenario.antenna_gain_rx == b.scenario.antenna_gain_rx &&
         a.scenario.wavelength_m == b.scenario.wavelength_m &&
         a.scenario.system_loss == b.scenario.system_loss &&
         a.scenario.noise_power_w == b.scenario.noise_power_w &&
         a.scenario.snr_target == b.scenario.snr_target &&
         a.run.strategies == b.run.strategies && a.run.rho_targets == b.run.rho_targets &&
         a.run.trials == b.run.trials && a.run.master_seed == b.run.master_seed &&
         a.run.workers == b.run.workers && a.run.ocpa_p_max_w == b.run.ocpa_p_max_w &&
         psm_eq(a.run.psm_fixed, b.run.psm_fixed) &&
         a.run.psm_grid.max_source_power_w == b.run.psm_grid.max_source_power_w &&
         a.run.psm_grid.points == b.run.psm_grid.points &&
         dest_eq(a.run.destination_box, b.run.destination_box) &&
         a.output.csv_path == b.output.csv_path &&
         a.output.per_trial_dump == b.output.per_trial_dump;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  ParseContext ctx;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "run" && section != "output")
        fail(where, "unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    if (section.empty()) fail(where, "key '" + key + "' appears before any section");
    set_key(cfg, ctx, section, key, value, where);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string write_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "source = " << format_double(cfg.scenario.source.x) << " "
      << format_double(cfg.scenario.source.y) << "\n";
  out << "dest = " << format_double(cfg.scenario.dest.x) << " "
      << format_double(cfg.scenario.dest.y) << "\n";
  if (!cfg.scenario.relays.empty()) {
    for (const Point2& p : cfg.scenario.relays)
      out << "relay = " << format_double(p.x) << " " << format_double(p.y) << "\n";
  } else if (cfg.scenario.relay_box) {
    const RelayBoxSpec& b = *cfg.scenario.relay_box;
    out << "relay_box = " << format_double(b.x0) << " " << format_double(b.x1) << " "
        << format_double(b.y0) << " " << format_double(b.y1) << "\n";
    out << "relay_count = " << b.count << "\n";
    out << "placement_seed = " << b.placement_seed << "\n";
  }
  out << "alpha = " << format_double(cfg.scenario.alpha) << "\n";
  out << "antenna_gain_tx = " << format_double(cfg.scenario.antenna_gain_tx) << "\n";
  out << "antenna_gain_rx = " << format_double(cfg.scenario.antenna_gain_rx) << "\n";
  out << "wavelength_m = " << format_double(cfg.scenario.wavelength_m) << "\n";
  out << "system_loss = " << format_double(cfg.scenario.system_loss) << "\n";
  out << "noise_power_w = " << format_double(cfg.scenario.noise_power_w) << "\n";
  out << "snr_target = " << format_double(cfg.scenario.snr_target) << "\n";

  out << "\n[run]\n";
  out << "strategies = ";
  for (std::size_t i = 0; i < cfg.run.strategies.size(); ++i) {
    if (i) out << ", ";
    out << strategy_name(cfg.run.strategies[i]);
  }
  out << "\n";
  out << "rho_targets = ";
  for (std::size_t i = 0; i < cfg.run.rho_targets.size(); ++i) {
    if (i) out << ", ";
    out << format_double(cfg.run.rho_targets[i]);
  }
  out << "\n";
  out << "trials = " << cfg.run.trials << "\n";
  out << "master_seed = " << cfg.run.master_seed << "\n";
  out << "workers = " << cfg.run.workers << "\n";
  out << "ocpa_p_max_w = " << format_double(cfg.run.ocpa_p_max_w) << "\n";
  if (cfg.run.psm_fixed) {
    out << "psm_source_power_w = " << format_double(cfg.run.psm_fixed->source_power_w) << "\n";
    out << "psm_gamma = " << format_double(cfg.run.psm_fixed->gamma) << "\n";
  }
  out << "psm_grid_max_w = " << format_double(cfg.run.psm_grid.max_source_power_w) << "\n";
  out << "psm_grid_points = " << cfg.run.psm_grid.points << "\n";
  if (cfg.run.destination_box) {
    const DestinationBox& b = *cfg.run.destination_box;
    out << "destination_box = " << format_double(b.x0) << " " << format_double(b.x1) << " "
        << format_double(b.y0) << " " << format_double(b.y1) << "\n";
  }

  out << "\n[output]\n";
  out << "csv = " << cfg.output.csv_path << "\n";
  out << "per_trial_dump = " << (cfg.output.per_trial_dump ? "true" : "false") << "\n";
  return out.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const std::string where = "<override " + assignment + ">";
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) fail(where, "expected section.key=value");
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const std::size_t dot = path.find('.');
  if (dot == std::string::npos) fail(where, "key must be qualified as section.key");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  if (key == "relay") fail(where, "relay coordinates cannot be overridden; use a config file");
  ParseContext ctx;
  ctx.saw_explicit_relay = !cfg.scenario.relays.empty();
  if (ctx.saw_explicit_relay && (key == "relay_box" || key == "relay_count" ||
                                 key == "placement_seed"))
    fail(where, "box settings conflict with explicit relay coordinates");
  set_key(cfg, ctx, section, key, value, where);
}

}  // namespace relaysim
