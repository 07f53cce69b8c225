#ifndef ENTROPIC_NONLINEAR_HPP
#define ENTROPIC_NONLINEAR_HPP

#include "entropic/integrators.hpp"
#include "entropic/types.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entropic {

enum class LinearSolverKind { direct, gmres };

/// Inner (Krylov) tolerance strategy.
struct Forcing {
  enum class Kind { fixed, eisenstat_walker };

  Kind kind = Kind::eisenstat_walker;
  double eta = 0.9;      // fixed forcing term
  double gamma = 0.9;    // Eisenstat–Walker γ
  double eta_max = 0.9;  // Eisenstat–Walker cap

  static Forcing fixed(double eta) { return {Kind::fixed, eta, 0.9, 0.9}; }
  static Forcing eisenstat_walker(double gamma = 0.9, double eta_max = 0.9) {
    return {Kind::eisenstat_walker, eta_max, gamma, eta_max};
  }
};

/// Stopping rule ‖F(U_k)‖ ≤ abs_tol + rel_tol ‖F(U_0)‖ in the dx-weighted
/// L2 norm of the stage system.
struct SolverConfig {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_iters = 50;
  LinearSolverKind linear_solver = LinearSolverKind::direct;
  Forcing forcing = Forcing::eisenstat_walker();
  /// Run exactly max_iters iterations regardless of the tolerances, stopping
  /// early only on an exactly zero residual. Tolerances may then both be 0.
  bool fixed_iterations = false;
  /// Keep every iterate U_k in the trace.
  bool record_iterates = false;

  void validate() const;
  static SolverConfig fixed(int iterations);
};

struct IterationTrace {
  /// ‖F(U_k)‖ for k = 0..K
  std::vector<double> residual_norms;
  /// Entropy of the would-be update of U_k, k = 0..K (empty if unknown)
  std::vector<double> update_entropy;
  /// ‖U_k − U_{k−1}‖ for k = 1..K
  std::vector<double> step_norms;
  /// Inner tolerance used in iteration k (GMRES only)
  std::vector<double> forcing_terms;
  /// Inner iterations per outer iteration (1 for a direct solve)
  std::vector<int> linear_iterations;
  /// Line-search factors (entropy-restoring inexact Newton only)
  std::vector<double> alphas;
  /// U_0..U_K when SolverConfig::record_iterates is set
  std::vector<Vector> iterates;
  bool converged = false;

  int iterations() const { return static_cast<int>(step_norms.size()); }
  int total_linear_iterations() const;
};

struct SolveResult {
  Vector U;
  IterationTrace trace;
};

/// Non-convergence or a failed linear solve. Carries the last iterate.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, IterationTrace trace, Vector last_iterate)
      : std::runtime_error(what), trace_(std::move(trace)), last_(std::move(last_iterate)) {}

  const IterationTrace& trace() const { return trace_; }
  const Vector& last_iterate() const { return last_; }

 private:
  IterationTrace trace_;
  Vector last_;
};

/// Newton with the exact Jacobian and dense direct solves.
SolveResult newton_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0);

/// Method of Newton type for the midpoint rule applied to the split
/// Burgers/KdV forms: the Jacobian term diag(DU) + D diag(U) is dropped so
/// that every iterate's update conserves ½‖u‖² exactly. Converges linearly.
SolveResult newton_type_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0);

/// Newton with an entropy-restoring line search: U_{k+1} = α Ũ + (1 − α) U_k
/// where Ũ is the Newton point and α the nonzero root of
/// ⟨U_{k+1}, U_{k+1} − uⁿ⟩ = 0. Midpoint rule, quadratic entropy.
SolveResult inexact_newton_entropy(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0);

/// Newton–GMRES; inner tolerance from cfg.forcing.
SolveResult newton_gmres_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0);

/// Non-trivial root of the entropy condition along U_k + α ΔU. Requires
/// ⟨U_k, U_k − uⁿ⟩ = 0 (asserted in debug builds). Throws SolverError
/// when ‖ΔU‖² < 1e-28.
double alpha_entropy_root(const Vector& dU, const Vector& U_tilde, const Vector& U_k, const Vector& u_prev);

/// Forcing term for the next inner solve (Kelley's safeguarded variant of
/// Eisenstat–Walker choice 2). Uses trace.residual_norms (current residual
/// last) and trace.forcing_terms (previous η values).
double eisenstat_walker_forcing(const IterationTrace& trace, const SolverConfig& cfg);

enum class NonlinearMethod { newton, newton_type, inexact_entropy, newton_gmres };

std::string_view to_string(NonlinearMethod m);
NonlinearMethod nonlinear_method_from_string(std::string_view s);

struct NonlinearSolver {
  NonlinearMethod method = NonlinearMethod::newton;
  SolverConfig config;

  SolveResult solve(const StageSystem& sys, const Vector& U0) const;
};

}  // namespace entropic

#endif  // ENTROPIC_NONLINEAR_HPP
