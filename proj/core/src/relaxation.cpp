#include "entropic/relaxation.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace entropic {

std::string_view to_string(RelaxationMode m) {
  switch (m) {
    case RelaxationMode::off:
      return "off";
    case RelaxationMode::quadratic:
      return "quadratic";
    case RelaxationMode::cubic:
      return "cubic";
    case RelaxationMode::general:
      return "general";
  }
  return "?";
}

std::string_view to_string(RelaxationTarget t) {
  return t == RelaxationTarget::conserve ? "conserve" : "rk_estimate";
}

RelaxationMode relaxation_mode_from_string(std::string_view s) {
  constexpr std::array all{RelaxationMode::off, RelaxationMode::quadratic, RelaxationMode::cubic,
                           RelaxationMode::general};
  for (RelaxationMode m : all) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown relaxation mode '" + std::string(s) + "'");
}

RelaxationTarget relaxation_target_from_string(std::string_view s) {
  if (s == "conserve") return RelaxationTarget::conserve;
  if (s == "rk_estimate") return RelaxationTarget::rk_estimate;
  throw ConfigError("unknown relaxation target '" + std::string(s) + "'");
}

void RelaxationPolicy::validate() const {
  if (!(gamma_min < 1.0 && 1.0 < gamma_max)) throw ConfigError("relaxation bounds must satisfy gamma_min < 1 < gamma_max");
  if (!(root_tol > 0.0)) throw ConfigError("relaxation tolerance must be positive");
  if (!(degenerate_threshold >= 0.0)) throw ConfigError("degenerate threshold must be non-negative");
}

bool degenerate_direction(const Vector& u_prev, const Vector& u_new, double threshold) {
  require_size(u_new.size(), u_prev.size(), "relaxation: u_new");
  return (u_new - u_prev).norm() <= threshold * (1.0 + u_prev.norm());
}

double gamma_quadratic(const Vector& u_prev, const Vector& U, double threshold) {
  require_size(U.size(), u_prev.size(), "gamma_quadratic");
  const Vector d = U - u_prev;
  // ‖U − uⁿ‖ is half the update direction
  if (2.0 * d.norm() <= threshold * (1.0 + u_prev.norm())) return 1.0;
  return (u_prev.squaredNorm() - U.dot(u_prev)) / d.squaredNorm();
}

namespace {

void check_bounds(double gamma, const RelaxationPolicy& policy, const char* who) {
  if (!std::isfinite(gamma) || gamma <= policy.gamma_min || gamma >= policy.gamma_max) {
    throw RelaxationError(std::string(who) + ": gamma = " + std::to_string(gamma) + " outside (" +
                          std::to_string(policy.gamma_min) + ", " + std::to_string(policy.gamma_max) + ")");
  }
}

void verify(const Functional& f, const Vector& u_prev, const Vector& d, double gamma, double f0, double delta,
            const char* who) {
  const double r = f(u_prev + gamma * d) - f0 - gamma * delta;
  if (!(std::abs(r) <= 1e-11 * (1.0 + std::abs(f0)))) {
    throw RelaxationError(std::string(who) + ": relaxed functional misses its target by " + std::to_string(r));
  }
}

}  // namespace

double gamma_quadratic_functional(const Vector& u_prev, const Vector& u_new, const Functional& f,
                                  std::optional<double> eta_target, const RelaxationPolicy& policy) {
  policy.validate();
  if (f.degree() > 2) throw ConfigError("gamma_quadratic_functional: functional '" + f.name() + "' is not quadratic");
  if (degenerate_direction(u_prev, u_new, policy.degenerate_threshold)) return 1.0;
  const Vector d = u_new - u_prev;
  const double f0 = f(u_prev);
  const double delta = eta_target.value_or(f0) - f0;
  // F(uⁿ + γd) − F(uⁿ) = aγ + bγ²
  const double p1 = f(u_new) - f0;
  const double pm1 = f(u_prev - d) - f0;
  const double b = 0.5 * (p1 + pm1);
  const double a = 0.5 * (p1 - pm1);
  if (b == 0.0) throw RelaxationError("gamma_quadratic_functional: functional is flat along the step");
  const double gamma = (delta - a) / b;
  check_bounds(gamma, policy, "gamma_quadratic_functional");
  verify(f, u_prev, d, gamma, f0, delta, "gamma_quadratic_functional");
  return gamma;
}

double gamma_cubic(const Vector& u_prev, const Vector& u_new, const Functional& f, std::optional<double> eta_target,
                   const RelaxationPolicy& policy) {
  policy.validate();
  if (f.degree() > 3) throw ConfigError("gamma_cubic: functional '" + f.name() + "' is not cubic");
  if (degenerate_direction(u_prev, u_new, policy.degenerate_threshold)) return 1.0;
  const Vector d = u_new - u_prev;
  const double f0 = f(u_prev);
  const double delta = eta_target.value_or(f0) - f0;

  // F(uⁿ + γd) − F(uⁿ) = aγ + bγ² + cγ³
  const double p1 = f(u_new) - f0;
  const double pm1 = f(u_prev - d) - f0;
  const double p2 = f(u_prev + 2.0 * d) - f0;
  const double b = 0.5 * (p1 + pm1);
  const double s = 0.5 * (p1 - pm1);
  const double c = (p2 - 4.0 * b - 2.0 * s) / 6.0;
  const double a = s - c;

  // c γ² + b γ + (a − δ) = 0
  const double a0 = a - delta;
  std::array<double, 2> roots{};
  int count = 0;
  const double scale = std::abs(a0) + std::abs(b) + std::abs(c);
  if (std::abs(c) <= 1e-14 * scale) {
    if (b == 0.0) throw RelaxationError("gamma_cubic: functional is flat along the step");
    roots[count++] = -a0 / b;
  } else {
    const double disc = b * b - 4.0 * c * a0;
    if (disc < 0.0) throw RelaxationError("gamma_cubic: no real root");
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    roots[count++] = q / c;
    if (q != 0.0) roots[count++] = a0 / q;
  }
  double gamma = roots[0];
  for (int i = 1; i < count; ++i) {
    if (std::abs(roots[i] - 1.0) < std::abs(gamma - 1.0)) gamma = roots[i];
  }
  check_bounds(gamma, policy, "gamma_cubic");
  verify(f, u_prev, d, gamma, f0, delta, "gamma_cubic");
  return gamma;
}

double gamma_general(const Vector& u_prev, const Vector& u_new, const Functional& f, double eta_target,
                     const RelaxationPolicy& policy) {
  policy.validate();
  if (degenerate_direction(u_prev, u_new, policy.degenerate_threshold)) return 1.0;
  const Vector d = u_new - u_prev;
  const double f0 = f(u_prev);
  const double delta = eta_target - f0;
  const double tol = policy.root_tol * (1.0 + std::abs(f0));
  auto g = [&](double gamma) { return (f(u_prev + gamma * d) - f0 - gamma * delta) / gamma; };

  const double lo = policy.gamma_min;
  const double hi = policy.gamma_max;
  const double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw RelaxationError("gamma_general: no sign change in the admissible interval");

  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi,
      [tol, &g](double x, double y) {
        return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
               std::abs(g(0.5 * (x + y))) <= tol;
      },
      max_iter);
  const double gamma = 0.5 * (bracket.first + bracket.second);
  if (!(std::abs(g(gamma) * gamma) <= tol)) {
    throw RelaxationError("gamma_general: root finder stopped at residual " + std::to_string(g(gamma) * gamma));
  }
  return gamma;
}

double eta_estimate_rk(const RKScheme& scheme, const std::vector<Vector>& stages, const Ode& ode,
                       const Functional& f, const Vector& u_prev, double dt) {
  if (!scheme.b_nonneg || (scheme.b.array() < 0.0).any()) {
    throw ConfigError("eta_estimate_rk: scheme '" + scheme.name + "' has negative weights");
  }
  require_size(stages.size(), static_cast<std::size_t>(scheme.stages()), "eta_estimate_rk: stages");
  double sum = 0.0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    sum += scheme.b[static_cast<Eigen::Index>(i)] * f.gradient(stages[i]).dot(ode.rhs(stages[i]));
  }
  return f(u_prev) + dt * sum;
}

Relaxed apply_relaxation(double t, double dt, const Vector& u_prev, const Vector& u_new, double gamma) {
  require_size(u_new.size(), u_prev.size(), "apply_relaxation");
  if (!std::isfinite(gamma)) throw std::invalid_argument("apply_relaxation: gamma must be finite");
  return {t + gamma * dt, u_prev + gamma * (u_new - u_prev)};
}

}  // namespace entropic
