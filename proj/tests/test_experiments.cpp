#include "doctest.h"
#include "oracles.hpp"

#include "entropic/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace entropic;

TEST_CASE("KdV soliton") {
  CHECK(exact_kdv_soliton(0.0, 0.0, 2.0, -10.0, 10.0) == doctest::Approx(1.0));
  CHECK(exact_kdv_soliton(3.0, 1.5, 2.0, -10.0, 10.0) == doctest::Approx(1.0));
  CHECK(exact_kdv_soliton(2.5, 0.0, 5.0, -100.0, 100.0) == doctest::Approx(2.5 / std::pow(std::cosh(0.5 * std::sqrt(5.0) * 2.5), 2)));
  for (double x : {-7.3, 0.4, 9.9}) {
    CHECK(std::abs(exact_kdv_soliton(x, 0.7, 2.0, -10.0, 10.0) - exact_kdv_soliton(x + 20.0, 0.7, 2.0, -10.0, 10.0)) <=
          1e-14);
  }
  // After one period the soliton is back where it started.
  const Grid g{-10.0, 10.0, 200};
  CHECK((exact_kdv_soliton(g, 10.0, 2.0) - exact_kdv_soliton(g, 0.0, 2.0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("BBM traveling wave") {
  const double c = 1.2;
  const double a = 0.6;
  const double k = 0.5 * std::sqrt(1.0 - 1.0 / 1.2);
  CHECK(exact_bbm_wave(0.0, 0.0, c, -90.0, 90.0) == doctest::Approx(a).epsilon(1e-14));
  CHECK(exact_bbm_wave(1.2 * 7.0, 7.0, c, -90.0, 90.0) == doctest::Approx(a).epsilon(1e-14));
  CHECK(exact_bbm_wave(10.0 + 1.2 * 3.0, 3.0, c, -90.0, 90.0) ==
        doctest::Approx(a / std::pow(std::cosh(10.0 * k), 2)).epsilon(1e-14));
  CHECK_THROWS(exact_bbm_wave(0.0, 0.0, 0.9, -90.0, 90.0));
}

TEST_CASE("l2_error") {
  const MassMatrix m{Vector::Constant(50, 0.1)};
  const Vector u = oracle::random_vector(50, 1);
  const Vector v = oracle::random_vector(50, 2);
  CHECK(l2_error(u, u, m) == 0.0);
  CHECK(l2_error(2 * u, 2 * v, m) == doctest::Approx(2 * l2_error(u, v, m)));
  CHECK(l2_error(u + Vector::Constant(50, 0.3), u, m) == doctest::Approx(0.3 * std::sqrt(50 * 0.1)));
}

TEST_CASE("config parsing") {
  const auto kv = parse_key_values("# comment\nequation = kdv\n\n  time.dt=0.1  # trailing\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[1].first == "time.dt");
  CHECK(kv[1].second == "0.1");
  CHECK_THROWS_AS(parse_key_values("no equals sign"), ConfigError);
  CHECK(parse_override("solver.rel_tol=1e-5").second == "1e-5");
  CHECK_THROWS_AS(parse_override("solver.rel_tol"), ConfigError);

  const auto cfg = make_config({{"equation", "bbm-central"}});
  CHECK(cfg.grid.n == 64);
  CHECK(cfg.family == OperatorFamily::fourier);
  CHECK(cfg.scheme == SchemeKind::avf);
  CHECK(cfg.wave_speed == 1.2);
  CHECK(cfg.value("time.t_end") == "500");
  CHECK(make_config({{"equation", "bbm-central"}}, true).t_end == 10000.0);

  const auto kdv = make_config({});
  CHECK(kdv.grid.dx() == doctest::Approx(0.1));
  CHECK(kdv.solver.linear_solver == LinearSolverKind::gmres);
  CHECK(kdv.d3_accuracy_order == 4);
  CHECK(with_override(kdv, "time.dt", "0.025").dt == 0.025);
  CHECK(kdv.resolved.size() == config_keys().size());

  CHECK_THROWS_AS(make_config({{"bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"time.dt", "fast"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"time.dt", "-1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"grid.operator", "fourier"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"equation", "bbm-split"}, {"wave.c", "0.8"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"sweep.parameter", "equation"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"relaxation.mode", "sometimes"}}), ConfigError);
  CHECK_THROWS_AS(load_config(std::string("/nonexistent/cfg"), {}), ConfigError);
}

TEST_CASE("Burgers Newton study") {
  auto cfg = make_config({{"equation", "burgers"}});
  const auto rows = run_burgers_newton_study(cfg);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].k == 0);
  CHECK(rows[0].drift == 0.0);
  for (const auto& r : rows) CHECK(std::abs(r.drift - r.predicted_drift) <= 1e-12);
  std::ostringstream os;
  write_study_csv(os, cfg, rows);
  CHECK(os.str().find("k,entropy,drift,residual,predicted_drift,alpha\n") != std::string::npos);
  CHECK_THROWS_AS(run_burgers_newton_study(make_config({})), ConfigError);
}

TEST_CASE("CSV layout") {
  CHECK(csv_header({"J1", "J2"}) == "step,t,l2_error,inv_J1,inv_J2,drift_J1,drift_J2,gamma,newton_iters,gmres_iters,residual");
  TimeSeriesRow r;
  r.step = 3;
  r.t = 0.1;
  r.invariants = {1.0 / 3.0};
  r.drifts = {0.0};
  r.newton_iters = 2;
  r.residual = 1e-5;
  CHECK(csv_row(r) == "3,0.10000000000000001,,0.33333333333333331,0,,2,0,1.0000000000000001e-05");
}

TEST_CASE("time integration is deterministic") {
  const auto cfg = make_config({{"time.t_end", "0.5"}, {"grid.n", "100"}, {"solver.rel_tol", "1e-6"},
                                {"relaxation.mode", "quadratic"}, {"output.record_every", "3"}});
  const std::string a = "determinism_a.csv";
  const std::string b = "determinism_b.csv";
  run_time_integration(cfg, a);
  run_time_integration(cfg, b);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  CHECK(ca.find("# equation = kdv\n") == 0);
  CHECK(ca.find("\nstep,t,l2_error,inv_mass,inv_entropy,drift_mass,drift_entropy,gamma,") != std::string::npos);
  CHECK(slurp(a + ".meta").find("status = ok") != std::string::npos);

  RunSummary summary;
  const auto rows = integrate_rows(cfg, &summary);
  CHECK(summary.steps == 10);
  CHECK(rows.front().step == 0);
  CHECK(rows.back().step == 10);
  CHECK(rows.size() == 5);
  CHECK(summary.final_t >= 0.5 * (1 - 1e-9));
  for (const auto& r : rows) CHECK(std::abs(r.drifts[1]) <= 1e-12);
}
