#include "entropic/integrators.hpp"

#include "entropic/semidisc.hpp"

#include <array>
#include <cmath>

namespace entropic {

RKScheme implicit_midpoint_scheme() {
  RKScheme s;
  s.name = "midpoint";
  s.a = Matrix::Constant(1, 1, 0.5);
  s.b = Vector::Ones(1);
  s.c = Vector::Constant(1, 0.5);
  s.v = Vector::Constant(1, 2.0);
  s.order = 2;
  s.symplectic = true;
  s.b_nonneg = true;
  s.sbp = false;
  return s;
}

RKScheme lobatto_iiic_scheme() {
  RKScheme s;
  s.name = "lobatto-iiic";
  s.a.resize(3, 3);
  s.a << 1.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0,
         1.0 / 6.0, 5.0 / 12.0, -1.0 / 12.0,
         1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0;
  s.b.resize(3);
  s.b << 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0;
  s.c.resize(3);
  s.c << 0.0, 0.5, 1.0;
  Vector v(3);
  v << 0.0, 0.0, 1.0;
  s.v = v;
  s.order = 4;
  s.symplectic = false;
  s.b_nonneg = true;
  s.sbp = true;
  return s;
}

std::string_view to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::midpoint:
      return "midpoint";
    case SchemeKind::lobatto_iiic:
      return "lobatto_iiic";
    case SchemeKind::avf:
      return "avf";
  }
  return "?";
}

SchemeKind scheme_from_string(std::string_view s) {
  constexpr std::array all{SchemeKind::midpoint, SchemeKind::lobatto_iiic, SchemeKind::avf};
  for (SchemeKind k : all) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

StageSystem::StageSystem(SchemeKind kind, const Ode& ode, Vector u_prev, double dt)
    : kind_(kind), ode_(ode), u_prev_(std::move(u_prev)), dt_(dt) {
  require_size(static_cast<std::size_t>(u_prev_.size()), ode_.size(), "StageSystem: u_prev");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("StageSystem: dt must be positive");
}

double StageSystem::norm(const Vector& U) const { return std::sqrt(ode_.weight()) * U.norm(); }

const Functional* StageSystem::entropy() const {
  const auto* sd = dynamic_cast<const SemiDiscretization*>(&ode_);
  return sd ? &sd->entropy() : nullptr;
}

RungeKuttaStageSystem::RungeKuttaStageSystem(SchemeKind kind, RKScheme scheme, const Ode& ode,
                                             Vector u_prev, double dt)
    : StageSystem(kind, ode, std::move(u_prev), dt), scheme_(std::move(scheme)) {
  if (!scheme_.v) throw ConfigError("RungeKuttaStageSystem: scheme needs a stage-to-update vector");
}

std::size_t RungeKuttaStageSystem::unknown_size() const {
  return ode().size() * static_cast<std::size_t>(scheme_.stages());
}

void RungeKuttaStageSystem::check(const Vector& U) const {
  require_size(static_cast<std::size_t>(U.size()), unknown_size(), "RungeKuttaStageSystem");
}

Vector RungeKuttaStageSystem::residual(const Vector& U) const {
  check(U);
  const int s = scheme_.stages();
  const auto n = static_cast<Eigen::Index>(ode().size());
  std::vector<Vector> f(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) f[static_cast<std::size_t>(j)] = ode().rhs(U.segment(j * n, n));
  Vector r(U.size());
  for (int i = 0; i < s; ++i) {
    Vector ri = U.segment(i * n, n) - u_prev();
    for (int j = 0; j < s; ++j) {
      const double aij = scheme_.a(i, j);
      if (aij != 0.0) ri -= dt() * aij * f[static_cast<std::size_t>(j)];
    }
    r.segment(i * n, n) = ri;
  }
  return r;
}

Matrix RungeKuttaStageSystem::jacobian(const Vector& U) const {
  check(U);
  const int s = scheme_.stages();
  const auto n = static_cast<Eigen::Index>(ode().size());
  Matrix jac = Matrix::Identity(s * n, s * n);
  for (int j = 0; j < s; ++j) {
    const Matrix fj = ode().jacobian(U.segment(j * n, n));
    for (int i = 0; i < s; ++i) {
      const double aij = scheme_.a(i, j);
      if (aij != 0.0) jac.block(i * n, j * n, n, n) -= dt() * aij * fj;
    }
  }
  return jac;
}

Vector RungeKuttaStageSystem::jacobian_apply(const Vector& U, const Vector& V) const {
  check(U);
  check(V);
  const int s = scheme_.stages();
  const auto n = static_cast<Eigen::Index>(ode().size());
  std::vector<Vector> w(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) {
    w[static_cast<std::size_t>(j)] = ode().jacobian_apply(U.segment(j * n, n), V.segment(j * n, n));
  }
  Vector out = V;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double aij = scheme_.a(i, j);
      if (aij != 0.0) out.segment(i * n, n) -= dt() * aij * w[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

Vector RungeKuttaStageSystem::update(const Vector& U) const {
  check(U);
  const Vector& v = *scheme_.v;
  const auto n = static_cast<Eigen::Index>(ode().size());
  if (kind() == SchemeKind::midpoint) return 2.0 * U - u_prev();
  if (v.sum() == 1.0) {
    // Lobatto IIIC: u^{n+1} is the last stage itself
    Vector u = Vector::Zero(n);
    for (int i = 0; i < scheme_.stages(); ++i) {
      if (v[i] != 0.0) u += v[i] * U.segment(i * n, n);
    }
    return u;
  }
  Vector u = u_prev();
  for (int i = 0; i < scheme_.stages(); ++i) u += v[i] * (U.segment(i * n, n) - u_prev());
  return u;
}

Vector RungeKuttaStageSystem::initial_guess() const {
  return u_prev().replicate(scheme_.stages(), 1);
}

std::vector<Vector> RungeKuttaStageSystem::stages(const Vector& U) const {
  check(U);
  const auto n = static_cast<Eigen::Index>(ode().size());
  std::vector<Vector> y;
  for (int i = 0; i < scheme_.stages(); ++i) y.emplace_back(U.segment(i * n, n));
  return y;
}

AvfStageSystem::AvfStageSystem(const Ode& ode, Vector u_prev, double dt)
    : StageSystem(SchemeKind::avf, ode, std::move(u_prev), dt), f_prev_(ode.rhs(this->u_prev())) {}

Vector AvfStageSystem::residual(const Vector& w) const {
  require_size(static_cast<std::size_t>(w.size()), unknown_size(), "AvfStageSystem::residual");
  const Vector mid = 0.5 * (w + u_prev());
  return w - u_prev() - (dt() / 6.0) * (f_prev_ + 4.0 * ode().rhs(mid) + ode().rhs(w));
}

Matrix AvfStageSystem::jacobian(const Vector& w) const {
  require_size(static_cast<std::size_t>(w.size()), unknown_size(), "AvfStageSystem::jacobian");
  const auto n = w.size();
  const Vector mid = 0.5 * (w + u_prev());
  Matrix j = Matrix::Identity(n, n);
  j -= (dt() / 6.0) * (2.0 * ode().jacobian(mid) + ode().jacobian(w));
  return j;
}

Vector AvfStageSystem::jacobian_apply(const Vector& w, const Vector& v) const {
  require_size(static_cast<std::size_t>(w.size()), unknown_size(), "AvfStageSystem::jacobian_apply");
  require_size(v.size(), w.size(), "AvfStageSystem::jacobian_apply");
  const Vector mid = 0.5 * (w + u_prev());
  return v - (dt() / 6.0) * (2.0 * ode().jacobian_apply(mid, v) + ode().jacobian_apply(w, v));
}

std::unique_ptr<StageSystem> midpoint_stage_system(const Ode& ode, const Vector& u_prev, double dt) {
  return std::make_unique<RungeKuttaStageSystem>(SchemeKind::midpoint, implicit_midpoint_scheme(), ode,
                                                 u_prev, dt);
}

std::unique_ptr<StageSystem> lobatto_iiic_stage_system(const Ode& ode, const Vector& u_prev, double dt) {
  return std::make_unique<RungeKuttaStageSystem>(SchemeKind::lobatto_iiic, lobatto_iiic_scheme(), ode,
                                                 u_prev, dt);
}

std::unique_ptr<StageSystem> avf_stage_system(const Ode& ode, const Vector& u_prev, double dt) {
  return std::make_unique<AvfStageSystem>(ode, u_prev, dt);
}

std::unique_ptr<StageSystem> make_stage_system(SchemeKind kind, const Ode& ode, const Vector& u_prev,
                                               double dt) {
  switch (kind) {
    case SchemeKind::midpoint:
      return midpoint_stage_system(ode, u_prev, dt);
    case SchemeKind::lobatto_iiic:
      return lobatto_iiic_stage_system(ode, u_prev, dt);
    case SchemeKind::avf:
      return avf_stage_system(ode, u_prev, dt);
  }
  throw ConfigError("make_stage_system: unknown scheme");
}

}  // namespace entropic
