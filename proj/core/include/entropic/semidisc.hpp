#ifndef ENTROPIC_SEMIDISC_HPP
#define ENTROPIC_SEMIDISC_HPP

#include "entropic/linalg.hpp"
#include "entropic/ode.hpp"
#include "entropic/operators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entropic {

enum class Equation { burgers, kdv, bbm_split, bbm_central };

std::string_view to_string(Equation e);
Equation equation_from_string(std::string_view s);

/// Periodic domain (x_min, x_max] with n uniform nodes.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 1;

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n); }
  Vector nodes() const { return periodic_nodes(x_min, x_max, n); }
};

enum class FunctionalKind { quadratic_entropy, linear_mass, bbm_j2, bbm_j3, bbm_hamiltonian };

/// A scalar functional of the discrete state and its gradient.
class Functional {
 public:
  using Eval = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  Functional(FunctionalKind kind, std::string name, int degree, std::size_t size, Eval eval,
             Gradient gradient);

  FunctionalKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Polynomial degree in u.
  int degree() const { return degree_; }
  std::size_t size() const { return size_; }

  double operator()(const Vector& u) const;
  Vector gradient(const Vector& u) const;

 private:
  FunctionalKind kind_;
  std::string name_;
  int degree_;
  std::size_t size_;
  Eval eval_;
  Gradient gradient_;
};

inline double eval_functional(const Functional& f, const Vector& u) { return f(u); }
inline Vector functional_gradient(const Functional& f, const Vector& u) { return f.gradient(u); }

/// ½ uᵀ M u
Functional quadratic_entropy(const MassMatrix& m);
/// 1ᵀ M u
Functional linear_mass(const MassMatrix& m, std::string name = "J1");
/// ½ uᵀ M (I − D2) u
Functional bbm_j2(const MassMatrix& m, const GridOperator& d2);
/// 1ᵀ M (1 + u)³
Functional bbm_j3(const MassMatrix& m);
/// 1ᵀ M (u³/6 + u²/2)
Functional bbm_hamiltonian(const MassMatrix& m);

// Building blocks. D1 is a skew first-derivative operator.

/// −2 (D u² + u ∘ D u)
Vector burgers_rhs(const GridOperator& d1, const Vector& u);
/// −2 (diag(u) D + diag(D u) + 2 D diag(u))
Matrix burgers_jacobian(const GridOperator& d1, const Vector& u);
Vector burgers_jacobian_apply(const GridOperator& d1, const Vector& u, const Vector& v);
/// diag(D u) + D diag(u): the part of the Burgers Jacobian that breaks
/// entropy conservation of Newton iterates. Its transpose annihilates u.
Matrix split_kernel_matrix(const GridOperator& d1, const Vector& u);

/// burgers_rhs(u) − D3 u
Vector kdv_rhs(const GridOperator& d1, const GridOperator& d3, const Vector& u);

/// Spatial semidiscretization u' = f(u) of one of the model equations.
/// Immutable after construction; the (I − D2) factorization for BBM is
/// built once here.
class SemiDiscretization final : public Ode {
 public:
  static SemiDiscretization burgers(const Grid& grid, GridOperator d1);
  static SemiDiscretization kdv(const Grid& grid, GridOperator d1, GridOperator d3);
  static SemiDiscretization bbm_split(const Grid& grid, GridOperator d1, GridOperator d2);
  static SemiDiscretization bbm_central(const Grid& grid, GridOperator d1, GridOperator d2);

  Equation equation() const { return equation_; }
  const Grid& grid() const { return grid_; }
  const MassMatrix& mass() const { return mass_; }
  const GridOperator& d1() const { return d1_; }
  const GridOperator& d2() const;
  const GridOperator& d3() const;

  std::size_t size() const override { return grid_.n; }
  Vector rhs(const Vector& u) const override;
  Matrix jacobian(const Vector& u) const override;
  Vector jacobian_apply(const Vector& u, const Vector& v) const override;
  double weight() const override { return grid_.dx(); }

  /// Conserved functionals, in reporting order.
  const std::vector<Functional>& invariants() const { return invariants_; }
  /// The nonlinear functional relaxation targets by default: ½‖u‖² for
  /// Burgers/KdV, J2 for the split BBM form, J3 for the central one.
  const Functional& entropy() const { return invariants_.at(entropy_index_); }
  const Functional& invariant(std::string_view name) const;

  /// (I − D2)⁻¹ x
  Vector elliptic_solve(const Vector& x) const;

 private:
  SemiDiscretization(Equation eq, const Grid& grid, GridOperator d1);
  void check(const Vector& u, const char* what) const;

  Equation equation_;
  Grid grid_;
  MassMatrix mass_;
  GridOperator d1_;
  std::optional<GridOperator> d2_;
  std::optional<GridOperator> d3_;
  std::shared_ptr<const DenseFactorization> elliptic_;
  std::shared_ptr<const Matrix> elliptic_d1_;  // (I − D2)⁻¹ D1
  std::vector<Functional> invariants_;
  std::size_t entropy_index_ = 0;
};

/// −(I − D2)⁻¹ (⅓ D1 u² + ⅓ u ∘ D1 u + D1 u); sd must be a split BBM form.
Vector bbm_split_rhs(const SemiDiscretization& sd, const Vector& u);
/// −(I − D2)⁻¹ D1 (½ u² + u); sd must be a central BBM form.
Vector bbm_central_rhs(const SemiDiscretization& sd, const Vector& u);

}  // namespace entropic

#endif  // ENTROPIC_SEMIDISC_HPP
