#include "doctest.h"
#include "oracles.hpp"
#include "test_odes.hpp"

#include "entropic/experiments.hpp"
#include "entropic/relaxation.hpp"
#include "entropic/time_step.hpp"

#include <cmath>

using namespace entropic;

namespace {

MassMatrix unit_weights(Eigen::Index n) { return MassMatrix{Vector::Ones(n)}; }

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

struct BurgersStep {
  ExperimentConfig cfg = make_config({{"equation", "burgers"}});
  SemiDiscretization sd = build_semidiscretization(cfg);
  Vector u0 = initial_state(cfg);
};

// Coefficients of F(uⁿ + γd) − F(uⁿ) = c1 γ + c2 γ² + c3 γ³ for F = Σ w (1 + u)³.
std::array<double, 3> j3_poly(const Vector& w, const Vector& u, const Vector& d) {
  const Vector a = Vector::Ones(u.size()) + u;
  return {3.0 * w.dot(a.cwiseProduct(a).cwiseProduct(d)), 3.0 * w.dot(a.cwiseProduct(d).cwiseProduct(d)),
          w.dot(d.cwiseProduct(d).cwiseProduct(d))};
}

}  // namespace

TEST_CASE("closed-form gamma for the midpoint rule") {
  const Vector u_prev = vec2(1, 0);
  const Vector U = vec2(0, 1);
  const double g = gamma_quadratic(u_prev, U);
  CHECK(g == doctest::Approx(0.5).epsilon(1e-15));
  const auto r = apply_relaxation(0.0, 1.0, u_prev, 2.0 * U - u_prev, g);
  CHECK((r.u - vec2(0, 1)).norm() <= 1e-15);
  CHECK(r.u.norm() == doctest::Approx(u_prev.norm()));
  CHECK(r.t == doctest::Approx(0.5));

  for (double s : {-3.0, 0.01, 7.5}) CHECK(gamma_quadratic(s * u_prev, s * U) == doctest::Approx(g).epsilon(1e-14));
  CHECK(gamma_quadratic(u_prev, u_prev) == 1.0);
}

TEST_CASE("exact midpoint solves need no relaxation") {
  BurgersStep b;
  const auto sys = midpoint_stage_system(b.sd, b.u0, 0.5);
  SolverConfig c;
  c.rel_tol = 1e-13;
  c.abs_tol = 1e-14;
  const Vector U = newton_solve(*sys, c, sys->initial_guess()).U;
  CHECK(std::abs(gamma_quadratic(b.u0, U) - 1.0) <= 1e-10);
}

TEST_CASE("gamma_quadratic_functional and gamma_general agree with the closed form") {
  BurgersStep b;
  const auto sys = midpoint_stage_system(b.sd, b.u0, 0.5);
  const Vector U = newton_solve(*sys, SolverConfig::fixed(2), sys->initial_guess()).U;
  const Vector u1 = sys->update(U);
  const auto& eta = b.sd.entropy();
  const double closed = gamma_quadratic(b.u0, U);
  CHECK(closed != doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gamma_quadratic_functional(b.u0, u1, eta) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(gamma_general(b.u0, u1, eta, eta(b.u0)) == doctest::Approx(closed).epsilon(1e-10));
  // Target equal to the unrelaxed value: γ = 1.
  CHECK(gamma_general(b.u0, u1, eta, eta(u1)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gamma_cubic without a real root") {
  // One node, F(u) = (1 + u)³, uⁿ = 0, d = 1: γ² + 3γ + 3 = 0.
  const Functional f1 = bbm_j3(unit_weights(1));
  CHECK_THROWS_AS(gamma_cubic(Vector::Zero(1), Vector::Ones(1), f1), RelaxationError);
  // Two nodes, uⁿ = (1, −1), d = (1, 1): γ² + 3γ + 6 = 0.
  const Functional f2 = bbm_j3(unit_weights(2));
  CHECK_THROWS_AS(gamma_cubic(vec2(1, -1), vec2(2, 0), f2), RelaxationError);
  CHECK(gamma_cubic(vec2(1, -1), vec2(1, -1), f2) == 1.0);
  CHECK_THROWS_AS(gamma_general(vec2(1, -1), vec2(2, 0), f2, f2(vec2(1, -1))), RelaxationError);
}

TEST_CASE("gamma_cubic with a real root") {
  const Vector w = Vector::Ones(3);
  const Functional f = bbm_j3(MassMatrix{w});
  Vector u(3), d(3);
  u << 0.2, -0.1, 0.05;
  d << 0.3, -0.4, 0.1;
  const auto c = j3_poly(w, u, d);
  const double root = 0.9;
  const double target = f(u) + c[0] + c[1] * root + c[2] * root * root;
  const double other = -c[1] / c[2] - root;
  REQUIRE(std::abs(other - 1.0) > std::abs(root - 1.0));

  const double g = gamma_cubic(u, u + d, f, target);
  CHECK(g == doctest::Approx(root).epsilon(1e-12));
  CHECK(gamma_general(u, u + d, f, target) == doctest::Approx(root).epsilon(1e-10));
  const double lhs = f(u + g * d);
  CHECK(lhs == doctest::Approx(f(u) + g * (target - f(u))).epsilon(1e-13));
}

TEST_CASE("relaxation rejects roots outside the admissible interval") {
  const Vector u_prev = vec2(1, 0);
  const Vector u_new = 2.0 * vec2(0, 1) - u_prev;
  const Functional eta = quadratic_entropy(unit_weights(2));
  CHECK_THROWS_AS(gamma_quadratic_functional(u_prev, u_new, eta), RelaxationError);
  RelaxationPolicy wide;
  wide.gamma_min = 0.1;
  CHECK(gamma_quadratic_functional(u_prev, u_new, eta, std::nullopt, wide) == doctest::Approx(0.5));
  RelaxationPolicy bad;
  bad.gamma_max = 0.9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(gamma_quadratic_functional(u_prev, u_new, bbm_j3(unit_weights(2))), ConfigError);
}

TEST_CASE("entropy estimate from Runge-Kutta stages") {
  BurgersStep b;
  const auto sys = lobatto_iiic_stage_system(b.sd, b.u0, 0.5);
  const Vector U = newton_solve(*sys, SolverConfig::fixed(3), sys->initial_guess()).U;
  const auto& eta = b.sd.entropy();
  CHECK(std::abs(eta_estimate_rk(*sys->scheme(), sys->stages(U), b.sd, eta, b.u0, 0.5) - eta(b.u0)) <= 1e-12);

  // One stage, synthetic linear f, quadratic F with weights w.
  Matrix l(2, 2);
  l << 0.3, 1.0, -2.0, 0.1;
  const testode::Linear ode(l);
  const Vector w = vec2(0.5, 2.0);
  const Functional f = quadratic_entropy(MassMatrix{w});
  const Vector y = vec2(0.7, -0.2);
  const Vector u_prev = vec2(1.0, 0.5);
  const Vector ly = l * y;
  const double hand = 0.5 * (0.5 * 1.0 + 2.0 * 0.25) + 0.1 * (0.5 * 0.7 * ly[0] + 2.0 * -0.2 * ly[1]);
  CHECK(eta_estimate_rk(implicit_midpoint_scheme(), {y}, ode, f, u_prev, 0.1) == doctest::Approx(hand).epsilon(1e-14));
}

TEST_CASE("apply_relaxation endpoints") {
  const Vector a = oracle::random_vector(5, 1);
  const Vector b = oracle::random_vector(5, 2);
  const auto one = apply_relaxation(2.0, 0.1, a, b, 1.0);
  CHECK(one.t == doctest::Approx(2.1));
  CHECK((one.u - b).norm() <= 1e-15);
  const auto zero = apply_relaxation(2.0, 0.1, a, b, 0.0);
  CHECK(zero.t == 2.0);
  CHECK((zero.u - a).norm() == 0.0);
}

TEST_CASE("step without relaxation on a trivial system") {
  const testode::Constant ode(Vector::Zero(3));
  const Vector u0 = oracle::random_vector(3, 4);
  const auto sys = midpoint_stage_system(ode, u0, 0.1);
  NonlinearSolver solver;
  const auto r = step(0.0, *sys, solver, RelaxationPolicy{});
  CHECK((r.u - u0).norm() == 0.0);
  CHECK(!r.report.gamma);
  CHECK(r.report.newton_iterations <= 1);
  CHECK(r.t == doctest::Approx(0.1));
}

TEST_CASE("relaxed Burgers step conserves entropy at loose tolerance") {
  BurgersStep b;
  const auto sys = midpoint_stage_system(b.sd, b.u0, 0.5);
  NonlinearSolver solver;
  solver.config.rel_tol = 1e-3;
  RelaxationPolicy relax;
  relax.mode = RelaxationMode::quadratic;
  const auto r = step(0.0, *sys, solver, relax);
  REQUIRE(r.report.gamma);
  CHECK(std::abs(b.sd.entropy()(r.u) - b.sd.entropy()(b.u0)) <= 1e-12);
  CHECK(r.t == doctest::Approx(0.5 * *r.report.gamma));
}

TEST_CASE("one Newton step drifts by the split-form quadratic") {
  BurgersStep b;
  const auto sys = midpoint_stage_system(b.sd, b.u0, 0.5);
  NonlinearSolver solver;
  solver.config = SolverConfig::fixed(1);
  const auto r = step(0.0, *sys, solver, RelaxationPolicy{});
  const Vector U1 = (r.u + b.u0) / 2.0;
  const double predicted = midpoint_newton_entropy_change(b.sd.d1(), 0.5, b.u0, U1 - b.u0);
  const double drift = b.sd.entropy()(r.u) - b.sd.entropy()(b.u0);
  CHECK(std::abs(drift - predicted) <= 1e-12);
  CHECK(drift != 0.0);
}
