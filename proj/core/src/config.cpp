#include "entropic/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace entropic {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const KeyValues& base_defaults() {
  static const KeyValues d = {
      {"equation", "kdv"},
      {"grid.x_min", "-10"},
      {"grid.x_max", "10"},
      {"grid.n", "200"},
      {"grid.operator", "fd"},
      {"grid.accuracy_order", "4"},
      {"grid.d3_accuracy_order", "auto"},
      {"scheme", "midpoint"},
      {"time.dt", "0.05"},
      {"time.t_end", "100"},
      {"time.t_end_full", "1000"},
      {"solver.method", "newton-gmres"},
      {"solver.linear_solver", "direct"},
      {"solver.abs_tol", "0"},
      {"solver.rel_tol", "1e-3"},
      {"solver.max_iters", "50"},
      {"solver.forcing", "eisenstat-walker"},
      {"solver.forcing_eta", "0.1"},
      {"solver.ew_gamma", "0.9"},
      {"solver.eta_max", "0.9"},
      {"relaxation.mode", "off"},
      {"relaxation.functional", "auto"},
      {"relaxation.target", "conserve"},
      {"relaxation.gamma_min", "0.5"},
      {"relaxation.gamma_max", "1.5"},
      {"relaxation.tol", "1e-13"},
      {"wave.c", "2"},
      {"output.path", ""},
      {"output.record_every", "1"},
      {"study.k_max", "8"},
      {"study.variant", "newton"},
      {"sweep.parameter", ""},
      {"sweep.values", ""},
  };
  return d;
}

// Per-equation departures from base_defaults.
KeyValues preset(Equation eq) {
  switch (eq) {
    case Equation::burgers:
      return {{"time.dt", "0.5"},        {"time.t_end", "0.5"},    {"time.t_end_full", "0.5"},
              {"solver.method", "newton"}, {"solver.rel_tol", "1e-12"}};
    case Equation::kdv:
      return {};
    case Equation::bbm_split:
    case Equation::bbm_central:
      return {{"grid.x_min", "-90"},
              {"grid.x_max", "90"},
              {"grid.n", "64"},
              {"grid.operator", "fourier"},
              {"scheme", eq == Equation::bbm_split ? "midpoint" : "avf"},
              {"time.dt", "0.25"},
              {"time.t_end", "500"},
              {"time.t_end_full", "10000"},
              {"wave.c", "1.2"}};
  }
  return {};
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string ExperimentConfig::value(std::string_view key) const {
  for (const auto& [k, v] : resolved) {
    if (k == key) return v;
  }
  throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& kv : base_defaults()) k.push_back(kv.first);
    return k;
  }();
  return keys;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(std::string_view(body).substr(eq + 1)));
  }
  return out;
}

std::pair<std::string, std::string> parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(text) + "' is not key=value");
  std::string key = trim(text.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + std::string(text) + "' has an empty key");
  return {std::move(key), trim(text.substr(eq + 1))};
}

ExperimentConfig make_config(const KeyValues& entries, bool full_scale) {
  const auto& keys = config_keys();
  std::map<std::string, std::string> given;
  for (const auto& [k, v] : entries) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("config: unknown key '" + k + "'");
    given[k] = v;
  }

  std::map<std::string, std::string> eff(base_defaults().begin(), base_defaults().end());
  const Equation eq = equation_from_string(given.count("equation") ? given["equation"] : eff["equation"]);
  for (const auto& [k, v] : preset(eq)) eff[k] = v;
  for (const auto& [k, v] : given) eff[k] = v;
  if (full_scale) eff["time.t_end"] = eff["time.t_end_full"];

  ExperimentConfig cfg;
  for (const auto& k : keys) cfg.resolved.emplace_back(k, eff[k]);
  auto num = [&](const char* k) { return to_double(k, eff[k]); };
  auto integer = [&](const char* k) { return to_long(k, eff[k]); };

  cfg.equation = eq;
  cfg.grid.x_min = num("grid.x_min");
  cfg.grid.x_max = num("grid.x_max");
  const long n = integer("grid.n");
  if (n < 2) throw ConfigError("config: grid.n must be at least 2");
  cfg.grid.n = static_cast<std::size_t>(n);
  if (!(cfg.grid.x_max > cfg.grid.x_min)) throw ConfigError("config: grid.x_max must exceed grid.x_min");

  const std::string& op = eff["grid.operator"];
  if (op == "fd") {
    cfg.family = OperatorFamily::central_fd;
  } else if (op == "fourier") {
    cfg.family = OperatorFamily::fourier;
  } else {
    throw ConfigError("config: grid.operator must be fd or fourier");
  }
  cfg.accuracy_order = static_cast<int>(integer("grid.accuracy_order"));
  cfg.d3_accuracy_order =
      eff["grid.d3_accuracy_order"] == "auto" ? cfg.accuracy_order : static_cast<int>(integer("grid.d3_accuracy_order"));
  if (eq == Equation::kdv && cfg.family == OperatorFamily::fourier) {
    throw ConfigError("config: kdv needs grid.operator = fd");
  }

  cfg.scheme = scheme_from_string(eff["scheme"]);
  cfg.dt = num("time.dt");
  cfg.t_end = num("time.t_end");
  cfg.t_end_full = num("time.t_end_full");
  if (!(cfg.dt > 0.0)) throw ConfigError("config: time.dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("config: time.t_end must be positive");

  cfg.method = nonlinear_method_from_string(eff["solver.method"]);
  const std::string& ls = eff["solver.linear_solver"];
  if (ls == "direct") {
    cfg.solver.linear_solver = LinearSolverKind::direct;
  } else if (ls == "gmres") {
    cfg.solver.linear_solver = LinearSolverKind::gmres;
  } else {
    throw ConfigError("config: solver.linear_solver must be direct or gmres");
  }
  if (cfg.method == NonlinearMethod::newton_gmres) cfg.solver.linear_solver = LinearSolverKind::gmres;
  cfg.solver.abs_tol = num("solver.abs_tol");
  cfg.solver.rel_tol = num("solver.rel_tol");
  cfg.solver.max_iters = static_cast<int>(integer("solver.max_iters"));
  const std::string& forcing = eff["solver.forcing"];
  if (forcing == "eisenstat-walker") {
    cfg.solver.forcing = Forcing::eisenstat_walker(num("solver.ew_gamma"), num("solver.eta_max"));
  } else if (forcing == "fixed") {
    cfg.solver.forcing = Forcing::fixed(num("solver.forcing_eta"));
  } else {
    throw ConfigError("config: solver.forcing must be eisenstat-walker or fixed");
  }
  cfg.solver.validate();

  cfg.relaxation.mode = relaxation_mode_from_string(eff["relaxation.mode"]);
  cfg.relaxation.target = relaxation_target_from_string(eff["relaxation.target"]);
  cfg.relaxation.gamma_min = num("relaxation.gamma_min");
  cfg.relaxation.gamma_max = num("relaxation.gamma_max");
  cfg.relaxation.root_tol = num("relaxation.tol");
  cfg.relaxation.validate();
  cfg.relax_functional = eff["relaxation.functional"];

  cfg.wave_speed = num("wave.c");
  if (!(cfg.wave_speed > 0.0)) throw ConfigError("config: wave.c must be positive");
  if ((eq == Equation::bbm_split || eq == Equation::bbm_central) && !(cfg.wave_speed > 1.0)) {
    throw ConfigError("config: bbm traveling waves need wave.c > 1");
  }
  cfg.output_path = eff["output.path"];
  cfg.record_every = static_cast<int>(integer("output.record_every"));
  if (cfg.record_every < 1) throw ConfigError("config: output.record_every must be at least 1");

  cfg.study_k_max = static_cast<int>(integer("study.k_max"));
  if (cfg.study_k_max < 0) throw ConfigError("config: study.k_max must be non-negative");
  cfg.study_variant = nonlinear_method_from_string(eff["study.variant"]);

  cfg.sweep_parameter = eff["sweep.parameter"];
  cfg.sweep_values = split_list(eff["sweep.values"]);
  if (!cfg.sweep_parameter.empty()) {
    if (std::find(keys.begin(), keys.end(), cfg.sweep_parameter) == keys.end() ||
        cfg.sweep_parameter == "equation" || cfg.sweep_parameter.rfind("sweep.", 0) == 0) {
      throw ConfigError("config: cannot sweep over '" + cfg.sweep_parameter + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                             bool full_scale) {
  KeyValues entries;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file '" + *path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    entries = parse_key_values(ss.str());
  }
  for (const auto& o : overrides) entries.push_back(parse_override(o));
  return make_config(entries, full_scale);
}

ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  KeyValues entries = cfg.resolved;
  entries.emplace_back(key, value);
  return make_config(entries);
}

}  // namespace entropic
