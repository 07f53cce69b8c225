#ifndef ENTROPIC_TIME_STEP_HPP
#define ENTROPIC_TIME_STEP_HPP

#include "entropic/integrators.hpp"
#include "entropic/nonlinear.hpp"
#include "entropic/relaxation.hpp"

#include <optional>
#include <vector>

namespace entropic {

struct SolveReport {
  int newton_iterations = 0;
  int linear_iterations = 0;
  std::vector<double> residual_history;
  double final_residual = 0.0;
  /// Relaxed functional (or the entropy) at uⁿ and at the accepted state.
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  std::optional<double> gamma;
  double wall_seconds = 0.0;
  IterationTrace trace;
};

struct StepResult {
  Vector u;
  double t;
  SolveReport report;
};

/// One implicit step from (t, sys.u_prev()): solve from sys.initial_guess(),
/// form the update and relax it according to the policy. Throws SolverError
/// or RelaxationError.
StepResult step(double t, const StageSystem& sys, const NonlinearSolver& solver, const RelaxationPolicy& relax);

}  // namespace entropic

#endif  // ENTROPIC_TIME_STEP_HPP
