#include "entropic/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Experiment config file (key = value lines)");
  cmd->add_option("--override", o.overrides, "Replace one config entry, key=value (repeatable)");
  cmd->add_option("--out", o.out, "Output CSV path (default: output.path)");
  cmd->add_flag("--full-scale", o.full_scale, "Run to time.t_end_full");
}

entropic::ExperimentConfig resolve(const Options& o) {
  std::optional<std::string> path;
  if (!o.config.empty()) path = o.config;
  return entropic::load_config(path, o.overrides, o.full_scale);
}

std::string output_path(const Options& o, const entropic::ExperimentConfig& cfg) {
  return o.out.empty() ? cfg.output_path : o.out;
}

int burgers_study(const Options& o) {
  const auto cfg = resolve(o);
  const auto rows = entropic::run_burgers_newton_study(cfg);
  const std::string path = output_path(o, cfg);
  if (path.empty()) {
    entropic::write_study_csv(std::cout, cfg, rows);
    return 0;
  }
  std::ofstream os(path);
  if (!os) throw entropic::ConfigError("cannot write '" + path + "'");
  entropic::write_study_csv(os, cfg, rows);
  std::ofstream meta(path + ".meta");
  for (const auto& [k, v] : cfg.resolved) meta << k << " = " << v << '\n';
  return 0;
}

int integrate(const Options& o) {
  const auto cfg = resolve(o);
  const std::string path = output_path(o, cfg);
  if (path.empty()) throw entropic::ConfigError("integrate needs --out or output.path");
  const auto s = entropic::run_time_integration(cfg, path);
  std::cerr << "wrote " << path << " (" << s.steps << " steps, t = " << s.final_t << ")\n";
  return 0;
}

int sweep(const Options& o) {
  const auto cfg = resolve(o);
  const std::string path = output_path(o, cfg);
  if (path.empty()) throw entropic::ConfigError("sweep needs --out or output.path");
  int status = 0;
  for (const auto& r : entropic::run_sweep(cfg, path)) {
    if (r.ok) {
      std::cerr << "wrote " << r.path << '\n';
    } else {
      std::cerr << cfg.sweep_parameter << " = " << r.value << " failed: " << r.error << '\n';
      status = 1;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-conserving implicit time integration experiments"};
  app.require_subcommand(1);
  Options opts;
  auto* study = app.add_subcommand("burgers-study", "Entropy and residual per Newton iteration for one Burgers step");
  auto* integ = app.add_subcommand("integrate", "Time integration with CSV time series");
  auto* sw = app.add_subcommand("sweep", "Run sweep.parameter over sweep.values");
  for (auto* cmd : {study, integ, sw}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (study->parsed()) return burgers_study(opts);
    if (integ->parsed()) return integrate(opts);
    return sweep(opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const entropic::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
}
