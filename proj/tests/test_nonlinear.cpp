#include "doctest.h"
#include "oracles.hpp"
#include "test_odes.hpp"

#include "entropic/experiments.hpp"
#include "entropic/nonlinear.hpp"

#include <cmath>

using namespace entropic;

namespace {

// F(x) = x² − 4 dressed up as a stage system.
class ScalarRoot final : public StageSystem {
 public:
  explicit ScalarRoot(const Ode& ode) : StageSystem(SchemeKind::midpoint, ode, Vector::Constant(1, 3.0), 1.0) {}
  std::size_t unknown_size() const override { return 1; }
  Vector residual(const Vector& x) const override { return Vector::Constant(1, x[0] * x[0] - 4.0); }
  Matrix jacobian(const Vector& x) const override { return Matrix::Constant(1, 1, 2.0 * x[0]); }
  Vector jacobian_apply(const Vector& x, const Vector& v) const override { return jacobian(x) * v; }
  Vector update(const Vector& x) const override { return x; }
  Vector initial_guess() const override { return u_prev(); }
  std::vector<Vector> stages(const Vector& x) const override { return {x}; }
};

ExperimentConfig burgers_cfg() { return make_config({{"equation", "burgers"}}); }

// Roots of ‖ΔU‖²α² + (⟨ΔU, U_k − uⁿ⟩ + ⟨U_k, ΔU⟩)α + ⟨U_k, U_k − uⁿ⟩ = 0, by the quadratic formula.
std::pair<double, double> entropy_roots(const Vector& dU, const Vector& U_k, const Vector& u_prev) {
  const double a = dU.squaredNorm();
  const double b = dU.dot(U_k - u_prev) + U_k.dot(dU);
  const double c = U_k.dot(U_k - u_prev);
  const double disc = std::sqrt(b * b - 4 * a * c);
  return {(-b - disc) / (2 * a), (-b + disc) / (2 * a)};
}

}  // namespace

TEST_CASE("Newton on x^2 - 4") {
  const testode::Constant ode(Vector::Zero(1));
  const ScalarRoot sys(ode);
  SolverConfig cfg;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-14;
  cfg.record_iterates = true;
  const auto r = newton_solve(sys, cfg, sys.initial_guess());
  const auto& it = r.trace.iterates;
  REQUIRE(it.size() >= 4);
  CHECK(it[0][0] == 3.0);
  CHECK(it[1][0] == doctest::Approx(13.0 / 6.0).epsilon(1e-15));
  // 13/6 − (169/36 − 4)/(13/3) = 313/156
  CHECK(it[2][0] == doctest::Approx(313.0 / 156.0).epsilon(1e-15));
  CHECK(r.U[0] == doctest::Approx(2.0).epsilon(1e-15));
  // Quadratic convergence: e_{k+1} / e_k² → 1/(2x*) = 1/4.
  const double e1 = it[1][0] - 2.0;
  const double e2 = it[2][0] - 2.0;
  CHECK(e2 / (e1 * e1) == doctest::Approx(1.0 / (2.0 * it[1][0])).epsilon(1e-10));
}

TEST_CASE("Newton returns immediately on a solution") {
  const testode::Constant ode(Vector::Zero(1));
  const ScalarRoot sys(ode);
  const auto r = newton_solve(sys, SolverConfig{}, Vector::Constant(1, 2.0));
  CHECK(r.trace.iterations() == 0);
  CHECK(r.trace.converged);
}

TEST_CASE("non-convergence raises SolverError with the last iterate") {
  const testode::Constant ode(Vector::Zero(1));
  const ScalarRoot sys(ode);
  SolverConfig cfg;
  cfg.rel_tol = 1e-15;
  cfg.max_iters = 2;
  try {
    newton_solve(sys, cfg, sys.initial_guess());
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.trace().iterations() == 2);
    CHECK(e.last_iterate()[0] == doctest::Approx(313.0 / 156.0));
  }
}

TEST_CASE("Eisenstat-Walker forcing") {
  SolverConfig cfg;
  cfg.rel_tol = 1e-3;
  IterationTrace t;
  t.residual_norms = {1.0};
  CHECK(eisenstat_walker_forcing(t, cfg) == doctest::Approx(0.9));
  t.residual_norms = {1.0, 0.5};
  t.forcing_terms = {0.9};
  CHECK(eisenstat_walker_forcing(t, cfg) == doctest::Approx(0.729));
  // Safeguard inactive once γη² ≤ 0.1.
  t.residual_norms = {1.0, 0.5, 0.1};
  t.forcing_terms = {0.9, 0.3};
  CHECK(eisenstat_walker_forcing(t, cfg) == doctest::Approx(0.9 * 0.04));
  for (double r : {2.0, 1.0, 0.99, 0.3}) {
    t.residual_norms = {1.0, r};
    t.forcing_terms = {0.9};
    CHECK(eisenstat_walker_forcing(t, cfg) <= 0.9);
  }
}

TEST_CASE("entropy root of the line search") {
  Vector u_prev(2), U_k(2), dU(2);
  u_prev << 1, 0;
  U_k << 0.5, 0.5;
  dU << 1.0, -0.5;
  const auto [r1, r2] = entropy_roots(dU, U_k, u_prev);
  const double nonzero = std::abs(r1) > std::abs(r2) ? r1 : r2;
  const double alpha = alpha_entropy_root(dU, U_k + dU, U_k, u_prev);
  CHECK(alpha == doctest::Approx(nonzero).epsilon(1e-14));
  CHECK(alpha == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(alpha != 0.0);

  // Ũ already satisfies the condition: α = 1.
  dU << 0.5, -0.5;
  CHECK(alpha_entropy_root(dU, U_k + dU, U_k, u_prev) == doctest::Approx(1.0).epsilon(1e-14));

  // Homogeneity: scaling every input by 2 keeps the condition satisfied.
  dU << 1.0, -0.5;
  const double a2 = alpha_entropy_root(2 * dU, 2 * (U_k + dU), 2 * U_k, 2 * u_prev);
  const Vector U = 2 * U_k + a2 * 2 * dU;
  CHECK(std::abs(U.dot(U - 2 * u_prev)) <= 1e-14);
  CHECK(a2 == doctest::Approx(alpha).epsilon(1e-14));

  CHECK_THROWS_AS(alpha_entropy_root(Vector::Zero(2), U_k, U_k, u_prev), SolverError);
}

TEST_CASE("Newton-type and line-search iterates conserve entropy") {
  const auto cfg = burgers_cfg();
  const auto sd = build_semidiscretization(cfg);
  const Vector u0 = initial_state(cfg);
  const auto sys = midpoint_stage_system(sd, u0, 0.5);
  const double eta0 = sd.entropy()(u0);
  SolverConfig sc = SolverConfig::fixed(10);
  sc.record_iterates = true;
  for (auto* solve : {&newton_type_solve, &inexact_newton_entropy}) {
    const auto r = (*solve)(*sys, sc, sys->initial_guess());
    for (const Vector& U : r.trace.iterates) CHECK(std::abs(sd.entropy()(sys->update(U)) - eta0) <= 1e-12);
  }
}

TEST_CASE("Newton-type requires the split midpoint setting") {
  const testode::Constant ode(Vector::Zero(3));
  const auto sys = midpoint_stage_system(ode, Vector::Zero(3), 0.1);
  CHECK_THROWS_AS(newton_type_solve(*sys, SolverConfig{}, sys->initial_guess()), ConfigError);
}

TEST_CASE("Newton-GMRES on a linear residual takes one outer step") {
  Matrix s = oracle::random_matrix(8, 2);
  const testode::Linear ode(Matrix(s - s.transpose()));
  const auto sys = midpoint_stage_system(ode, oracle::random_vector(8, 3), 0.2);
  SolverConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.forcing = Forcing::fixed(1e-12);
  const auto r = newton_gmres_solve(*sys, cfg, sys->initial_guess());
  CHECK(r.trace.iterations() == 1);
  CHECK(r.trace.converged);
}

TEST_CASE("Newton-GMRES with tight inner solves tracks Newton") {
  const auto cfg = burgers_cfg();
  const auto sd = build_semidiscretization(cfg);
  const auto sys = midpoint_stage_system(sd, initial_state(cfg), 0.5);
  SolverConfig sc;
  sc.rel_tol = 1e-10;
  const int newton = newton_solve(*sys, sc, sys->initial_guess()).trace.iterations();
  sc.forcing = Forcing::fixed(1e-12);
  const int gm = newton_gmres_solve(*sys, sc, sys->initial_guess()).trace.iterations();
  CHECK(std::abs(newton - gm) <= 1);
}

TEST_CASE("solver method names") {
  for (auto m : {NonlinearMethod::newton, NonlinearMethod::newton_type, NonlinearMethod::inexact_entropy,
                 NonlinearMethod::newton_gmres}) {
    CHECK(nonlinear_method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(nonlinear_method_from_string("bfgs"), ConfigError);
  SolverConfig bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
