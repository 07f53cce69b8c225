#include "entropic/experiments.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

namespace entropic {

double wrap_periodic(double x, double length) { return x - length * std::floor(x / length + 0.5); }

double exact_kdv_soliton(double x, double t, double c, double x_min, double x_max) {
  if (!(c > 0.0)) throw std::domain_error("exact_kdv_soliton: c must be positive");
  const double xi = wrap_periodic(x - c * t, x_max - x_min);
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(c) * xi);
  return 0.5 * c * s * s;
}

Vector exact_kdv_soliton(const Grid& grid, double t, double c) {
  const Vector x = grid.nodes();
  return x.unaryExpr([&](double xi) { return exact_kdv_soliton(xi, t, c, grid.x_min, grid.x_max); });
}

double exact_bbm_wave(double x, double t, double c, double x_min, double x_max) {
  if (!(c > 1.0)) throw std::domain_error("exact_bbm_wave: c must exceed 1");
  const double a = 3.0 * (c - 1.0);
  const double k = 0.5 * std::sqrt(1.0 - 1.0 / c);
  const double s = 1.0 / std::cosh(k * wrap_periodic(x - c * t, x_max - x_min));
  return a * s * s;
}

Vector exact_bbm_wave(const Grid& grid, double t, double c) {
  const Vector x = grid.nodes();
  return x.unaryExpr([&](double xi) { return exact_bbm_wave(xi, t, c, grid.x_min, grid.x_max); });
}

double l2_error(const Vector& u, const Vector& u_exact, const MassMatrix& m) {
  require_size(u_exact.size(), u.size(), "l2_error: exact solution");
  require_size(m.weights.size(), u.size(), "l2_error: mass matrix");
  return std::sqrt((m.weights.array() * (u - u_exact).array().square()).sum());
}

SemiDiscretization build_semidiscretization(const ExperimentConfig& cfg) {
  const Grid& g = cfg.grid;
  auto op = [&](int order) {
    return cfg.family == OperatorFamily::fourier ? make_fourier(order, g.n, g.length())
                                                 : make_central_fd(order, cfg.accuracy_order, g.n, g.dx());
  };
  switch (cfg.equation) {
    case Equation::burgers:
      return SemiDiscretization::burgers(g, op(1));
    case Equation::kdv:
      return SemiDiscretization::kdv(g, op(1), make_central_fd(3, cfg.d3_accuracy_order, g.n, g.dx()));
    case Equation::bbm_split:
      return SemiDiscretization::bbm_split(g, op(1), op(2));
    case Equation::bbm_central:
      return SemiDiscretization::bbm_central(g, op(1), op(2));
  }
  throw ConfigError("build_semidiscretization: unknown equation");
}

std::optional<Vector> exact_solution(const ExperimentConfig& cfg, double t) {
  switch (cfg.equation) {
    case Equation::burgers:
      return std::nullopt;
    case Equation::kdv:
      return exact_kdv_soliton(cfg.grid, t, cfg.wave_speed);
    case Equation::bbm_split:
    case Equation::bbm_central:
      return exact_bbm_wave(cfg.grid, t, cfg.wave_speed);
  }
  return std::nullopt;
}

Vector initial_state(const ExperimentConfig& cfg) {
  if (cfg.equation == Equation::burgers) return exact_kdv_soliton(cfg.grid, 0.0, cfg.wave_speed);
  return *exact_solution(cfg, 0.0);
}

RelaxationPolicy relaxation_policy(const ExperimentConfig& cfg, const SemiDiscretization& sd) {
  RelaxationPolicy p = cfg.relaxation;
  if (cfg.relax_functional != "auto") p.functional = sd.invariant(cfg.relax_functional);
  return p;
}

// ---- Newton study -------------------------------------------------------

double midpoint_newton_entropy_change(const GridOperator& d1, double dt, const Vector& U_k, const Vector& dU) {
  require_size(dU.size(), U_k.size(), "midpoint_newton_entropy_change");
  return -2.0 * d1.dx() * dt * dU.dot(split_kernel_matrix(d1, U_k) * dU);
}

double lobatto_newton_entropy_change(const GridOperator& d1, const RKScheme& scheme, double dt, const Vector& u_prev,
                                     const Vector& U_next, const Vector& U_k) {
  const auto n = static_cast<Eigen::Index>(d1.size());
  const int s = scheme.stages();
  require_size(U_next.size(), n * s, "lobatto_newton_entropy_change");
  require_size(U_k.size(), n * s, "lobatto_newton_entropy_change");
  const Vector dU = U_next - U_k;
  double form = 0.0;
  for (int i = 0; i < s; ++i) {
    const Vector di = dU.segment(i * n, n);
    form += scheme.b[i] * di.dot(split_kernel_matrix(d1, U_k.segment(i * n, n)) * di);
  }
  const Vector y1 = U_next.head(n) - u_prev;
  return -0.5 * d1.dx() * y1.squaredNorm() - 2.0 * dt * d1.dx() * form;
}

std::vector<StudyRow> run_burgers_newton_study(const ExperimentConfig& cfg) {
  if (cfg.equation != Equation::burgers) throw ConfigError("burgers-study needs equation = burgers");
  const SemiDiscretization sd = build_semidiscretization(cfg);
  const Vector u0 = initial_state(cfg);
  const auto sys = make_stage_system(cfg.scheme, sd, u0, cfg.dt);

  SolverConfig sc = SolverConfig::fixed(cfg.study_k_max);
  sc.linear_solver = cfg.solver.linear_solver;
  sc.forcing = cfg.solver.forcing;
  sc.record_iterates = true;
  const NonlinearSolver solver{cfg.study_variant, sc};
  const SolveResult res = solver.solve(*sys, sys->initial_guess());
  const IterationTrace& tr = res.trace;

  const Functional& eta = sd.entropy();
  const double eta0 = eta(u0);
  std::vector<StudyRow> rows;
  for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
    StudyRow row;
    row.k = static_cast<int>(k);
    row.entropy = tr.update_entropy[k];
    row.drift = row.entropy - eta0;
    row.residual = tr.residual_norms[k];
    if (k > 0 && cfg.study_variant == NonlinearMethod::newton) {
      if (cfg.scheme == SchemeKind::midpoint) {
        row.predicted_drift = midpoint_newton_entropy_change(sd.d1(), cfg.dt, tr.iterates[k - 1],
                                                             tr.iterates[k] - tr.iterates[k - 1]);
      } else if (cfg.scheme == SchemeKind::lobatto_iiic) {
        row.predicted_drift =
            lobatto_newton_entropy_change(sd.d1(), *sys->scheme(), cfg.dt, u0, tr.iterates[k], tr.iterates[k - 1]);
      }
    }
    if (k > 0 && k <= tr.alphas.size()) row.alpha = tr.alphas[k - 1];
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

void write_config_echo(std::ostream& os, const ExperimentConfig& cfg) {
  for (const auto& [k, v] : cfg.resolved) os << "# " << k << " = " << v << '\n';
}

void write_study_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<StudyRow>& rows) {
  write_config_echo(os, cfg);
  os << "k,entropy,drift,residual,predicted_drift,alpha\n";
  for (const StudyRow& r : rows) {
    os << r.k << ',' << num(r.entropy) << ',' << num(r.drift) << ',' << num(r.residual) << ','
       << num(r.predicted_drift) << ',' << (r.alpha ? num(*r.alpha) : std::string()) << '\n';
  }
}

// ---- time integration ---------------------------------------------------

RunSummary integrate(const ExperimentConfig& cfg, const RowSink& sink) {
  const SemiDiscretization sd = build_semidiscretization(cfg);
  const RelaxationPolicy policy = relaxation_policy(cfg, sd);
  const NonlinearSolver solver{cfg.method, cfg.solver};
  const auto& invariants = sd.invariants();

  RunSummary summary;
  for (const Functional& f : invariants) summary.invariant_names.push_back(f.name());

  Vector u = initial_state(cfg);
  double t = 0.0;
  std::vector<double> inv0;
  for (const Functional& f : invariants) inv0.push_back(f(u));

  auto make_row = [&](long n, const SolveReport* rep) {
    TimeSeriesRow row;
    row.step = n;
    row.t = t;
    if (auto ex = exact_solution(cfg, t)) row.l2_error = l2_error(u, *ex, sd.mass());
    for (std::size_t i = 0; i < invariants.size(); ++i) {
      row.invariants.push_back(invariants[i](u));
      row.drifts.push_back(row.invariants.back() - inv0[i]);
    }
    if (rep) {
      row.gamma = rep->gamma;
      row.newton_iters = rep->newton_iterations;
      row.gmres_iters = cfg.solver.linear_solver == LinearSolverKind::gmres ? rep->linear_iterations : 0;
      row.residual = rep->final_residual;
    }
    return row;
  };

  sink(make_row(0, nullptr));
  const double stop = cfg.t_end * (1.0 - 1e-12);
  long n = 0;
  while (t < stop) {
    const auto sys = make_stage_system(cfg.scheme, sd, u, cfg.dt);
    StepResult r = step(t, *sys, solver, policy);
    u = std::move(r.u);
    t = r.t;
    ++n;
    if (n % cfg.record_every == 0 || t >= stop) sink(make_row(n, &r.report));
  }
  summary.steps = n;
  summary.final_t = t;
  summary.final_u = u;
  return summary;
}

std::vector<TimeSeriesRow> integrate_rows(const ExperimentConfig& cfg, RunSummary* summary) {
  std::vector<TimeSeriesRow> rows;
  RunSummary s = integrate(cfg, [&](const TimeSeriesRow& r) { rows.push_back(r); });
  if (summary) *summary = std::move(s);
  return rows;
}

std::string csv_header(const std::vector<std::string>& invariant_names) {
  std::string h = "step,t,l2_error";
  for (const auto& name : invariant_names) h += ",inv_" + name;
  for (const auto& name : invariant_names) h += ",drift_" + name;
  h += ",gamma,newton_iters,gmres_iters,residual";
  return h;
}

std::string csv_row(const TimeSeriesRow& row) {
  std::string s = fmt::format("{},{},{}", row.step, num(row.t), row.l2_error ? num(*row.l2_error) : std::string());
  for (double v : row.invariants) s += ',' + num(v);
  for (double v : row.drifts) s += ',' + num(v);
  s += fmt::format(",{},{},{},{}", row.gamma ? num(*row.gamma) : std::string(), row.newton_iters, row.gmres_iters,
                   num(row.residual));
  return s;
}

RunSummary run_time_integration(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw ConfigError("cannot write '" + path + "'");
  std::ofstream meta(path + ".meta");
  if (!meta) throw ConfigError("cannot write '" + path + ".meta'");
  for (const auto& [k, v] : cfg.resolved) meta << k << " = " << v << '\n';

  write_config_echo(csv, cfg);
  const SemiDiscretization sd = build_semidiscretization(cfg);
  std::vector<std::string> names;
  for (const Functional& f : sd.invariants()) names.push_back(f.name());
  csv << csv_header(names) << '\n';

  long rows = 0;
  try {
    RunSummary s = integrate(cfg, [&](const TimeSeriesRow& r) {
      csv << csv_row(r) << '\n';
      ++rows;
    });
    meta << "# status = ok\n# steps = " << s.steps << "\n# final_t = " << num(s.final_t) << '\n';
    return s;
  } catch (const std::exception& e) {
    csv.flush();
    meta << "# status = failed\n# rows = " << rows << "\n# error = " << e.what() << '\n';
    throw;
  }
}

std::vector<SweepOutcome> run_sweep(const ExperimentConfig& cfg, const std::string& base_path) {
  if (cfg.sweep_parameter.empty() || cfg.sweep_values.empty()) {
    throw ConfigError("sweep needs sweep.parameter and sweep.values");
  }
  const std::filesystem::path base(base_path);
  std::vector<ExperimentConfig> runs;
  std::vector<SweepOutcome> out;
  for (const auto& v : cfg.sweep_values) {
    ExperimentConfig c = with_override(cfg, cfg.sweep_parameter, v);
    std::filesystem::path p = base;
    p.replace_filename(base.stem().string() + "." + cfg.sweep_parameter + "=" + v + base.extension().string());
    out.push_back({v, p.string(), false, {}});
    runs.push_back(std::move(c));
  }

  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] { run_time_integration(runs[i], out[i].path); }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      jobs[i].get();
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace entropic
