#include "entropic/nonlinear.hpp"

#include "entropic/linalg.hpp"
#include "entropic/semidisc.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

namespace entropic {

void SolverConfig::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) throw ConfigError("solver tolerances must be non-negative");
  if (!fixed_iterations && abs_tol == 0.0 && rel_tol == 0.0) {
    throw ConfigError("solver tolerances must not both be zero");
  }
  if (max_iters < 0) throw ConfigError("solver max_iters must be non-negative");
  if (forcing.kind == Forcing::Kind::eisenstat_walker) {
    if (!(forcing.eta_max > 0.0 && forcing.eta_max < 1.0)) throw ConfigError("eta_max must lie in (0, 1)");
    if (!(forcing.gamma > 0.0 && forcing.gamma <= 1.0)) throw ConfigError("Eisenstat-Walker gamma must lie in (0, 1]");
  } else if (!(forcing.eta > 0.0 && forcing.eta < 1.0)) {
    throw ConfigError("fixed forcing term must lie in (0, 1)");
  }
}

SolverConfig SolverConfig::fixed(int iterations) {
  SolverConfig cfg;
  cfg.abs_tol = 0.0;
  cfg.rel_tol = 0.0;
  cfg.max_iters = iterations;
  cfg.fixed_iterations = true;
  return cfg;
}

int IterationTrace::total_linear_iterations() const {
  return std::accumulate(linear_iterations.begin(), linear_iterations.end(), 0);
}

double eisenstat_walker_forcing(const IterationTrace& trace, const SolverConfig& cfg) {
  const auto& r = trace.residual_norms;
  if (r.empty()) throw std::invalid_argument("eisenstat_walker_forcing: no residual recorded");
  const double gamma = cfg.forcing.gamma;
  const double eta_max = cfg.forcing.eta_max;
  if (r.size() == 1 || trace.forcing_terms.empty()) return eta_max;

  const double rk = r.back();
  const double rprev = r[r.size() - 2];
  if (!(rk > 0.0) || !(rprev > 0.0)) return eta_max;
  const double eta_prev = trace.forcing_terms.back();

  double eta = gamma * (rk / rprev) * (rk / rprev);
  const double safeguard = gamma * eta_prev * eta_prev;
  if (safeguard > 0.1) eta = std::max(eta, safeguard);
  eta = std::min(eta_max, eta);
  // do not ask for more than the outer stopping test needs
  const double stop = cfg.abs_tol + cfg.rel_tol * r.front();
  return std::min(eta_max, std::max(eta, 0.5 * stop / rk));
}

double alpha_entropy_root(const Vector& dU, const Vector& U_tilde, const Vector& U_k, const Vector& u_prev) {
  require_size(U_tilde.size(), dU.size(), "alpha_entropy_root");
  require_size(U_k.size(), dU.size(), "alpha_entropy_root");
  require_size(u_prev.size(), dU.size(), "alpha_entropy_root");
  assert(std::abs(U_k.dot(U_k - u_prev)) <= 1e-8 * std::max(U_k.squaredNorm(), u_prev.squaredNorm()) &&
         "alpha_entropy_root: U_k violates the entropy condition");
  const double d2 = dU.squaredNorm();
  if (d2 < 1e-28) throw SolverError("alpha_entropy_root: degenerate Newton step", {}, U_k);
  return -(dU.dot(U_k) + U_tilde.dot(U_k - u_prev)) / d2;
}

namespace {

// Returns the next iterate, or nullopt when the step vanished.
using Advance = std::function<std::optional<Vector>(const Vector& U, const Vector& F, IterationTrace& trace)>;

SolveResult iterate(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0, const Advance& advance) {
  cfg.validate();
  require_size(static_cast<std::size_t>(U0.size()), sys.unknown_size(), "nonlinear solve: U0");
  const Functional* entropy = sys.entropy();

  IterationTrace trace;
  Vector U = U0;
  Vector F = sys.residual(U);
  double r = sys.norm(F);
  auto record = [&] {
    trace.residual_norms.push_back(r);
    if (entropy) trace.update_entropy.push_back((*entropy)(sys.update(U)));
    if (cfg.record_iterates) trace.iterates.push_back(U);
  };
  record();

  const double target = cfg.abs_tol + cfg.rel_tol * r;
  const double threshold = cfg.fixed_iterations ? 0.0 : target;
  int k = 0;
  while (true) {
    if (!std::isfinite(r)) throw SolverError("nonlinear solve: non-finite residual", trace, U);
    if (r <= threshold) {
      trace.converged = true;
      break;
    }
    if (k == cfg.max_iters) {
      if (cfg.fixed_iterations) {
        trace.converged = r <= target;
        break;
      }
      throw SolverError("nonlinear solve: no convergence after " + std::to_string(k) + " iterations", trace, U);
    }
    std::optional<Vector> next;
    try {
      next = advance(U, F, trace);
    } catch (const SingularMatrixError& e) {
      throw SolverError(std::string("nonlinear solve: ") + e.what(), trace, U);
    }
    if (!next) {
      trace.converged = true;
      break;
    }
    trace.step_norms.push_back(sys.norm(*next - U));
    U = std::move(*next);
    F = sys.residual(U);
    r = sys.norm(F);
    record();
    ++k;
  }
  return {U, std::move(trace)};
}

// Solves J dU = -F either densely or with GMRES, recording inner statistics.
Vector linear_step(const StageSystem& sys, const SolverConfig& cfg, const Matrix* dense,
                   const LinearAction& action, const Vector& F, IterationTrace& trace, const Vector& U) {
  if (cfg.linear_solver == LinearSolverKind::direct) {
    const Vector dU = DenseFactorization(*dense).solve(Vector(-F));
    trace.linear_iterations.push_back(1);
    return dU;
  }
  const double eta = cfg.forcing.kind == Forcing::Kind::fixed ? cfg.forcing.eta : eisenstat_walker_forcing(trace, cfg);
  trace.forcing_terms.push_back(eta);
  const auto n = static_cast<int>(sys.unknown_size());
  GmresResult res = gmres(action, -F, Vector::Zero(F.size()), eta, n);
  trace.linear_iterations.push_back(res.report.iterations);
  if (!res.report.converged && res.report.relative_residual >= 1.0) {
    throw SolverError("GMRES stagnated", trace, U);
  }
  return res.x;
}

Vector newton_direction(const StageSystem& sys, const SolverConfig& cfg, const Vector& U, const Vector& F,
                        IterationTrace& trace) {
  if (cfg.linear_solver == LinearSolverKind::direct) {
    const Matrix j = sys.jacobian(U);
    return linear_step(sys, cfg, &j, {}, F, trace, U);
  }
  const LinearAction action = [&sys, &U](const Vector& v) { return sys.jacobian_apply(U, v); };
  return linear_step(sys, cfg, nullptr, action, F, trace, U);
}

const SemiDiscretization& split_form_midpoint(const StageSystem& sys, const char* who) {
  const auto* sd = dynamic_cast<const SemiDiscretization*>(&sys.ode());
  if (sys.kind() != SchemeKind::midpoint || !sd ||
      (sd->equation() != Equation::burgers && sd->equation() != Equation::kdv)) {
    throw ConfigError(std::string(who) + ": requires the midpoint rule on the split Burgers/KdV form");
  }
  return *sd;
}

}  // namespace

SolveResult newton_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0) {
  return iterate(sys, cfg, U0, [&](const Vector& U, const Vector& F, IterationTrace& trace) {
    return std::optional<Vector>(U + newton_direction(sys, cfg, U, F, trace));
  });
}

SolveResult newton_gmres_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0) {
  SolverConfig gcfg = cfg;
  gcfg.linear_solver = LinearSolverKind::gmres;
  return newton_solve(sys, gcfg, U0);
}

SolveResult newton_type_solve(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0) {
  const SemiDiscretization& sd = split_form_midpoint(sys, "newton_type_solve");
  const Matrix& d = sd.d1().matrix();
  const double dt = sys.dt();
  const bool kdv = sd.equation() == Equation::kdv;

  return iterate(sys, cfg, U0, [&](const Vector& U, const Vector& F, IterationTrace& trace) {
    if (cfg.linear_solver == LinearSolverKind::direct) {
      const auto n = U.size();
      // I + Δt (diag(U) D + D diag(U)) [+ Δt/2 D3]
      Matrix j = Matrix::Identity(n, n);
      j += dt * (U.asDiagonal() * d);
      j += dt * (d * U.asDiagonal());
      if (kdv) j += 0.5 * dt * sd.d3().matrix();
      return std::optional<Vector>(U + linear_step(sys, cfg, &j, {}, F, trace, U));
    }
    const LinearAction action = [&](const Vector& v) -> Vector {
      Vector out = v + dt * (U.cwiseProduct(sd.d1().apply(v)) + sd.d1().apply(U.cwiseProduct(v)));
      if (kdv) out += 0.5 * dt * sd.d3().apply(v);
      return out;
    };
    return std::optional<Vector>(U + linear_step(sys, cfg, nullptr, action, F, trace, U));
  });
}

SolveResult inexact_newton_entropy(const StageSystem& sys, const SolverConfig& cfg, const Vector& U0) {
  split_form_midpoint(sys, "inexact_newton_entropy");
  const Vector& u_prev = sys.u_prev();
  return iterate(sys, cfg, U0, [&](const Vector& U, const Vector& F, IterationTrace& trace) -> std::optional<Vector> {
    const Vector dU = newton_direction(sys, cfg, U, F, trace);
    if (dU.squaredNorm() < 1e-28) return std::nullopt;
    const Vector U_tilde = U + dU;
    const double alpha = alpha_entropy_root(dU, U_tilde, U, u_prev);
    trace.alphas.push_back(alpha);
    return Vector(alpha * U_tilde + (1.0 - alpha) * U);
  });
}

std::string_view to_string(NonlinearMethod m) {
  switch (m) {
    case NonlinearMethod::newton:
      return "newton";
    case NonlinearMethod::newton_type:
      return "newton-type";
    case NonlinearMethod::inexact_entropy:
      return "inexact-entropy";
    case NonlinearMethod::newton_gmres:
      return "newton-gmres";
  }
  return "?";
}

NonlinearMethod nonlinear_method_from_string(std::string_view s) {
  constexpr std::array all{NonlinearMethod::newton, NonlinearMethod::newton_type, NonlinearMethod::inexact_entropy,
                           NonlinearMethod::newton_gmres};
  for (NonlinearMethod m : all) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown nonlinear method '" + std::string(s) + "'");
}

SolveResult NonlinearSolver::solve(const StageSystem& sys, const Vector& U0) const {
  switch (method) {
    case NonlinearMethod::newton:
      return newton_solve(sys, config, U0);
    case NonlinearMethod::newton_type:
      return newton_type_solve(sys, config, U0);
    case NonlinearMethod::inexact_entropy:
      return inexact_newton_entropy(sys, config, U0);
    case NonlinearMethod::newton_gmres:
      return newton_gmres_solve(sys, config, U0);
  }
  throw ConfigError("unknown nonlinear method");
}

}  // namespace entropic
