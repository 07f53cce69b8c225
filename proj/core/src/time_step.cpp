#include "entropic/time_step.hpp"

#include <chrono>
#include <cmath>

namespace entropic {

namespace {

double relaxation_gamma(const StageSystem& sys, const Vector& U, const Vector& u_new, const Functional& f,
                        const RelaxationPolicy& relax) {
  const Vector& u_prev = sys.u_prev();
  std::optional<double> target;
  if (relax.target == RelaxationTarget::rk_estimate) {
    const RKScheme* scheme = sys.scheme();
    if (!scheme) throw ConfigError("relaxation target rk_estimate needs a Runge-Kutta scheme");
    target = eta_estimate_rk(*scheme, sys.stages(U), sys.ode(), f, u_prev, sys.dt());
  }

  switch (relax.mode) {
    case RelaxationMode::quadratic:
      if (sys.kind() == SchemeKind::midpoint && f.kind() == FunctionalKind::quadratic_entropy && !target) {
        return gamma_quadratic(u_prev, U, relax.degenerate_threshold);
      }
      return gamma_quadratic_functional(u_prev, u_new, f, target, relax);
    case RelaxationMode::cubic:
      return gamma_cubic(u_prev, u_new, f, target, relax);
    case RelaxationMode::general:
      return gamma_general(u_prev, u_new, f, target.value_or(f(u_prev)), relax);
    case RelaxationMode::off:
      break;
  }
  return 1.0;
}

}  // namespace

StepResult step(double t, const StageSystem& sys, const NonlinearSolver& solver, const RelaxationPolicy& relax) {
  relax.validate();
  const auto start = std::chrono::steady_clock::now();
  const Functional* f = relax.functional ? &*relax.functional : sys.entropy();
  if (relax.enabled() && !f) throw ConfigError("relaxation needs a functional");

  SolveResult solved = solver.solve(sys, sys.initial_guess());
  const Vector u_new = sys.update(solved.U);

  StepResult out{u_new, t + sys.dt(), {}};
  SolveReport& rep = out.report;
  if (relax.enabled()) {
    const double gamma = relaxation_gamma(sys, solved.U, u_new, *f, relax);
    if (!(gamma > relax.gamma_min && gamma < relax.gamma_max)) {
      throw RelaxationError("relaxation parameter " + std::to_string(gamma) + " outside the admissible interval");
    }
    Relaxed r = apply_relaxation(t, sys.dt(), sys.u_prev(), u_new, gamma);
    out.u = std::move(r.u);
    out.t = r.t;
    rep.gamma = gamma;
  }

  if (f) {
    rep.entropy_before = (*f)(sys.u_prev());
    rep.entropy_after = (*f)(out.u);
  }
  rep.newton_iterations = solved.trace.iterations();
  rep.linear_iterations = solved.trace.total_linear_iterations();
  rep.residual_history = solved.trace.residual_norms;
  rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
  rep.trace = std::move(solved.trace);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace entropic
