#ifndef ENTROPIC_RELAXATION_HPP
#define ENTROPIC_RELAXATION_HPP

#include "entropic/integrators.hpp"
#include "entropic/semidisc.hpp"
#include "entropic/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entropic {

/// No admissible relaxation parameter; the caller should retry with a
/// smaller step.
class RelaxationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RelaxationMode { off, quadratic, cubic, general };
enum class RelaxationTarget { conserve, rk_estimate };

std::string_view to_string(RelaxationMode m);
std::string_view to_string(RelaxationTarget t);
RelaxationMode relaxation_mode_from_string(std::string_view s);
RelaxationTarget relaxation_target_from_string(std::string_view s);

struct RelaxationPolicy {
  RelaxationMode mode = RelaxationMode::off;
  RelaxationTarget target = RelaxationTarget::conserve;
  /// Functional to relax; the semidiscretization's entropy when unset.
  std::optional<Functional> functional;
  double gamma_min = 0.5;
  double gamma_max = 1.5;
  /// Residual tolerance of the general root finder, relative to 1 + |F(uⁿ)|.
  double root_tol = 1e-13;
  /// Directions with ‖d‖ ≤ threshold·(1 + ‖uⁿ‖) count as degenerate (γ = 1).
  double degenerate_threshold = 1e-14;

  void validate() const;
  bool enabled() const { return mode != RelaxationMode::off; }
};

/// True if u_new − u_prev is too small to relax along.
bool degenerate_direction(const Vector& u_prev, const Vector& u_new, double threshold = 1e-14);

/// Closed form for the midpoint rule and ½‖u‖²: relaxing
/// u^{n+1} = 2U − uⁿ keeps ‖u‖ fixed for γ = (‖uⁿ‖² − ⟨U, uⁿ⟩)/‖U − uⁿ‖².
/// No bounds check. Degenerate steps give 1.
double gamma_quadratic(const Vector& u_prev, const Vector& U, double threshold = 1e-14);

/// Any quadratic functional F: solves F(uⁿ + γd) = F(uⁿ) + γ(η_target − F(uⁿ))
/// from two evaluations of F. The target defaults to F(uⁿ).
double gamma_quadratic_functional(const Vector& u_prev, const Vector& u_new, const Functional& f,
                                  std::optional<double> eta_target = std::nullopt,
                                  const RelaxationPolicy& policy = {});

/// Cubic F: fits F(uⁿ + γd) − F(uⁿ) = aγ + bγ² + cγ³ from evaluations at
/// γ = 1, −1, 2 and returns the real root of the remaining quadratic closest
/// to 1. Throws RelaxationError when there is no real root in the bounds.
double gamma_cubic(const Vector& u_prev, const Vector& u_new, const Functional& f,
                   std::optional<double> eta_target = std::nullopt, const RelaxationPolicy& policy = {});

/// Bracketing root finder on (F(uⁿ + γd) − F(uⁿ) − γ(η_target − F(uⁿ)))/γ
/// over [γ_min, γ_max]. Throws RelaxationError without a sign change.
double gamma_general(const Vector& u_prev, const Vector& u_new, const Functional& f, double eta_target,
                     const RelaxationPolicy& policy = {});

/// η(uⁿ) + Δt Σ b_i ∇F(y_i)·f(y_i). Requires non-negative weights.
double eta_estimate_rk(const RKScheme& scheme, const std::vector<Vector>& stages, const Ode& ode,
                       const Functional& f, const Vector& u_prev, double dt);

struct Relaxed {
  double t;
  Vector u;
};

/// (tⁿ + γΔt, uⁿ + γ(u^{n+1} − uⁿ))
Relaxed apply_relaxation(double t, double dt, const Vector& u_prev, const Vector& u_new, double gamma);

}  // namespace entropic

#endif  // ENTROPIC_RELAXATION_HPP
