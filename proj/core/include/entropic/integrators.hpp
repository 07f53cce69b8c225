#ifndef ENTROPIC_INTEGRATORS_HPP
#define ENTROPIC_INTEGRATORS_HPP

#include "entropic/ode.hpp"
#include "entropic/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entropic {

class Functional;

/// Butcher data of an implicit Runge–Kutta method.
struct RKScheme {
  std::string name;
  Matrix a;
  Vector b;
  Vector c;
  /// Stage-to-update vector with Aᵀ v = b, so that
  /// u^{n+1} = uⁿ + Σ v_i (y_i − uⁿ).
  std::optional<Vector> v;
  int order = 1;
  bool symplectic = false;
  bool b_nonneg = false;
  /// B A⁻¹ + A⁻ᵀ B = e₁e₁ᵀ + e_s e_sᵀ
  bool sbp = false;

  int stages() const { return static_cast<int>(b.size()); }
};

RKScheme implicit_midpoint_scheme();
/// Three-stage, fourth-order Lobatto IIIC.
RKScheme lobatto_iiic_scheme();

enum class SchemeKind { midpoint, lobatto_iiic, avf };

std::string_view to_string(SchemeKind k);
SchemeKind scheme_from_string(std::string_view s);

/// Nonlinear system F(U) = 0 for one implicit step from uⁿ, plus the map
/// from its solution to u^{n+1}.
class StageSystem {
 public:
  virtual ~StageSystem() = default;

  SchemeKind kind() const { return kind_; }
  const Ode& ode() const { return ode_; }
  const Vector& u_prev() const { return u_prev_; }
  double dt() const { return dt_; }
  /// n·s for stacked Runge–Kutta stages, n otherwise.
  virtual std::size_t unknown_size() const = 0;

  virtual Vector residual(const Vector& U) const = 0;
  virtual Matrix jacobian(const Vector& U) const = 0;
  virtual Vector jacobian_apply(const Vector& U, const Vector& V) const = 0;
  virtual Vector update(const Vector& U) const = 0;
  /// uⁿ replicated over all unknowns.
  virtual Vector initial_guess() const = 0;
  /// Stage vectors y_1..y_s contained in U (just {U} for AVF).
  virtual std::vector<Vector> stages(const Vector& U) const = 0;
  /// Butcher data, or nullptr for methods that are not Runge–Kutta.
  virtual const RKScheme* scheme() const { return nullptr; }

  /// dx-weighted Euclidean norm over all unknowns.
  double norm(const Vector& U) const;
  /// The entropy of the underlying semidiscretization, if it has one.
  const Functional* entropy() const;

 protected:
  StageSystem(SchemeKind kind, const Ode& ode, Vector u_prev, double dt);

 private:
  SchemeKind kind_;
  const Ode& ode_;
  Vector u_prev_;
  double dt_;
};

/// Stacked stage equations F(U) = U − 1⊗uⁿ − Δt (A⊗I) f(U).
class RungeKuttaStageSystem final : public StageSystem {
 public:
  RungeKuttaStageSystem(SchemeKind kind, RKScheme scheme, const Ode& ode, Vector u_prev, double dt);

  std::size_t unknown_size() const override;
  Vector residual(const Vector& U) const override;
  Matrix jacobian(const Vector& U) const override;
  Vector jacobian_apply(const Vector& U, const Vector& V) const override;
  Vector update(const Vector& U) const override;
  Vector initial_guess() const override;
  std::vector<Vector> stages(const Vector& U) const override;
  const RKScheme* scheme() const override { return &scheme_; }

 private:
  void check(const Vector& U) const;

  RKScheme scheme_;
};

/// AVF in Simpson form, exact for up to quartic Hamiltonians:
/// G(w) = w − uⁿ − Δt/6 (f(uⁿ) + 4 f((w + uⁿ)/2) + f(w)).
class AvfStageSystem final : public StageSystem {
 public:
  AvfStageSystem(const Ode& ode, Vector u_prev, double dt);

  std::size_t unknown_size() const override { return static_cast<std::size_t>(u_prev().size()); }
  Vector residual(const Vector& w) const override;
  Matrix jacobian(const Vector& w) const override;
  Vector jacobian_apply(const Vector& w, const Vector& v) const override;
  Vector update(const Vector& w) const override { return w; }
  Vector initial_guess() const override { return u_prev(); }
  std::vector<Vector> stages(const Vector& w) const override { return {w}; }

 private:
  Vector f_prev_;
};

// The Ode must outlive the returned system.
std::unique_ptr<StageSystem> midpoint_stage_system(const Ode& ode, const Vector& u_prev, double dt);
std::unique_ptr<StageSystem> lobatto_iiic_stage_system(const Ode& ode, const Vector& u_prev, double dt);
std::unique_ptr<StageSystem> avf_stage_system(const Ode& ode, const Vector& u_prev, double dt);
std::unique_ptr<StageSystem> make_stage_system(SchemeKind kind, const Ode& ode, const Vector& u_prev,
                                               double dt);

}  // namespace entropic

#endif  // ENTROPIC_INTEGRATORS_HPP
