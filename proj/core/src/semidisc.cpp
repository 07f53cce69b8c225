#include "entropic/semidisc.hpp"

#include <array>
#include <utility>

namespace entropic {

std::string_view to_string(Equation e) {
  switch (e) {
    case Equation::burgers:
      return "burgers";
    case Equation::kdv:
      return "kdv";
    case Equation::bbm_split:
      return "bbm-split";
    case Equation::bbm_central:
      return "bbm-central";
  }
  return "?";
}

Equation equation_from_string(std::string_view s) {
  constexpr std::array all{Equation::burgers, Equation::kdv, Equation::bbm_split, Equation::bbm_central};
  for (Equation e : all) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError("unknown equation '" + std::string(s) + "'");
}

Functional::Functional(FunctionalKind kind, std::string name, int degree, std::size_t size, Eval eval,
                       Gradient gradient)
    : kind_(kind),
      name_(std::move(name)),
      degree_(degree),
      size_(size),
      eval_(std::move(eval)),
      gradient_(std::move(gradient)) {}

double Functional::operator()(const Vector& u) const {
  require_size(static_cast<std::size_t>(u.size()), size_, "Functional");
  return eval_(u);
}

Vector Functional::gradient(const Vector& u) const {
  require_size(static_cast<std::size_t>(u.size()), size_, "Functional::gradient");
  return gradient_(u);
}

Functional quadratic_entropy(const MassMatrix& m) {
  const Vector w = m.weights;
  return Functional(
      FunctionalKind::quadratic_entropy, "entropy", 2, static_cast<std::size_t>(w.size()),
      [w](const Vector& u) { return 0.5 * (w.array() * u.array().square()).sum(); },
      [w](const Vector& u) -> Vector { return w.cwiseProduct(u); });
}

Functional linear_mass(const MassMatrix& m, std::string name) {
  const Vector w = m.weights;
  return Functional(
      FunctionalKind::linear_mass, std::move(name), 1, static_cast<std::size_t>(w.size()),
      [w](const Vector& u) { return w.dot(u); }, [w](const Vector&) -> Vector { return w; });
}

Functional bbm_j2(const MassMatrix& m, const GridOperator& d2) {
  require_size(static_cast<std::size_t>(m.weights.size()), d2.size(), "bbm_j2");
  const auto n = static_cast<Eigen::Index>(d2.size());
  // M (I − D2), symmetrized
  Matrix a = m.weights.asDiagonal() * (Matrix::Identity(n, n) - d2.matrix());
  auto sym = std::make_shared<const Matrix>(0.5 * (a + a.transpose()));
  return Functional(
      FunctionalKind::bbm_j2, "J2", 2, d2.size(),
      [sym](const Vector& u) { return 0.5 * u.dot(*sym * u); },
      [sym](const Vector& u) -> Vector { return *sym * u; });
}

Functional bbm_j3(const MassMatrix& m) {
  const Vector w = m.weights;
  return Functional(
      FunctionalKind::bbm_j3, "J3", 3, static_cast<std::size_t>(w.size()),
      [w](const Vector& u) { return (w.array() * (1.0 + u.array()).cube()).sum(); },
      [w](const Vector& u) -> Vector { return (3.0 * w.array() * (1.0 + u.array()).square()).matrix(); });
}

Functional bbm_hamiltonian(const MassMatrix& m) {
  const Vector w = m.weights;
  return Functional(
      FunctionalKind::bbm_hamiltonian, "H", 3, static_cast<std::size_t>(w.size()),
      [w](const Vector& u) {
        const auto a = u.array();
        return (w.array() * (a.cube() / 6.0 + a.square() / 2.0)).sum();
      },
      [w](const Vector& u) -> Vector {
        const auto a = u.array();
        return (w.array() * (a.square() / 2.0 + a)).matrix();
      });
}

Vector burgers_rhs(const GridOperator& d1, const Vector& u) {
  require_size(u.size(), static_cast<Eigen::Index>(d1.size()), "burgers_rhs");
  return -2.0 * (d1.apply(u.cwiseProduct(u)) + u.cwiseProduct(d1.apply(u)));
}

Matrix burgers_jacobian(const GridOperator& d1, const Vector& u) {
  require_size(u.size(), static_cast<Eigen::Index>(d1.size()), "burgers_jacobian");
  const Matrix& d = d1.matrix();
  Matrix j = u.asDiagonal() * d;
  j += 2.0 * (d * u.asDiagonal());
  j.diagonal() += d * u;
  return -2.0 * j;
}

Vector burgers_jacobian_apply(const GridOperator& d1, const Vector& u, const Vector& v) {
  require_size(u.size(), static_cast<Eigen::Index>(d1.size()), "burgers_jacobian_apply");
  require_size(v.size(), u.size(), "burgers_jacobian_apply");
  return -2.0 * (u.cwiseProduct(d1.apply(v)) + v.cwiseProduct(d1.apply(u)) + 2.0 * d1.apply(u.cwiseProduct(v)));
}

Matrix split_kernel_matrix(const GridOperator& d1, const Vector& u) {
  require_size(u.size(), static_cast<Eigen::Index>(d1.size()), "split_kernel_matrix");
  const Matrix& d = d1.matrix();
  Matrix m = d * u.asDiagonal();
  m.diagonal() += d * u;
  return m;
}

Vector kdv_rhs(const GridOperator& d1, const GridOperator& d3, const Vector& u) {
  require_size(u.size(), static_cast<Eigen::Index>(d3.size()), "kdv_rhs");
  return burgers_rhs(d1, u) - d3.apply(u);
}

SemiDiscretization::SemiDiscretization(Equation eq, const Grid& grid, GridOperator d1)
    : equation_(eq), grid_(grid), mass_(d1.mass()), d1_(std::move(d1)) {
  if (d1_.size() != grid_.n) throw DimensionError("SemiDiscretization: operator size differs from grid");
  if (d1_.deriv_order() != 1 || d1_.symmetry() != Symmetry::skew) {
    throw ConfigError("SemiDiscretization: first-derivative operator must be skew");
  }
  if (std::abs(d1_.dx() - grid_.dx()) > 1e-12 * grid_.dx()) {
    throw ConfigError("SemiDiscretization: operator spacing differs from grid spacing");
  }
}

SemiDiscretization SemiDiscretization::burgers(const Grid& grid, GridOperator d1) {
  SemiDiscretization sd(Equation::burgers, grid, std::move(d1));
  sd.invariants_ = {linear_mass(sd.mass_, "mass"), quadratic_entropy(sd.mass_)};
  sd.entropy_index_ = 1;
  return sd;
}

SemiDiscretization SemiDiscretization::kdv(const Grid& grid, GridOperator d1, GridOperator d3) {
  SemiDiscretization sd(Equation::kdv, grid, std::move(d1));
  if (d3.size() != grid.n || d3.deriv_order() != 3 || d3.symmetry() != Symmetry::skew) {
    throw ConfigError("kdv: third-derivative operator must be skew and match the grid");
  }
  sd.d3_ = std::move(d3);
  sd.invariants_ = {linear_mass(sd.mass_, "mass"), quadratic_entropy(sd.mass_)};
  sd.entropy_index_ = 1;
  return sd;
}

namespace {

void attach_bbm(std::optional<GridOperator>& slot, GridOperator d2, std::size_t n) {
  if (d2.size() != n || d2.deriv_order() != 2 || d2.symmetry() != Symmetry::symmetric_nsd) {
    throw ConfigError("bbm: second-derivative operator must be symmetric and match the grid");
  }
  slot = std::move(d2);
}

}  // namespace

SemiDiscretization SemiDiscretization::bbm_split(const Grid& grid, GridOperator d1, GridOperator d2) {
  SemiDiscretization sd(Equation::bbm_split, grid, std::move(d1));
  attach_bbm(sd.d2_, std::move(d2), grid.n);
  const auto n = static_cast<Eigen::Index>(grid.n);
  sd.elliptic_ = std::make_shared<const DenseFactorization>(Matrix::Identity(n, n) - sd.d2_->matrix());
  sd.elliptic_d1_ = std::make_shared<const Matrix>(sd.elliptic_->solve(sd.d1_.matrix()));
  sd.invariants_ = {linear_mass(sd.mass_), bbm_j2(sd.mass_, *sd.d2_), bbm_j3(sd.mass_)};
  sd.entropy_index_ = 1;
  return sd;
}

SemiDiscretization SemiDiscretization::bbm_central(const Grid& grid, GridOperator d1, GridOperator d2) {
  SemiDiscretization sd(Equation::bbm_central, grid, std::move(d1));
  attach_bbm(sd.d2_, std::move(d2), grid.n);
  const auto n = static_cast<Eigen::Index>(grid.n);
  sd.elliptic_ = std::make_shared<const DenseFactorization>(Matrix::Identity(n, n) - sd.d2_->matrix());
  sd.elliptic_d1_ = std::make_shared<const Matrix>(sd.elliptic_->solve(sd.d1_.matrix()));
  sd.invariants_ = {linear_mass(sd.mass_), bbm_j2(sd.mass_, *sd.d2_), bbm_j3(sd.mass_),
                    bbm_hamiltonian(sd.mass_)};
  sd.entropy_index_ = 2;
  return sd;
}

const GridOperator& SemiDiscretization::d2() const {
  if (!d2_) throw ConfigError("semidiscretization has no second-derivative operator");
  return *d2_;
}

const GridOperator& SemiDiscretization::d3() const {
  if (!d3_) throw ConfigError("semidiscretization has no third-derivative operator");
  return *d3_;
}

const Functional& SemiDiscretization::invariant(std::string_view name) const {
  for (const auto& f : invariants_) {
    if (f.name() == name) return f;
  }
  throw ConfigError("no invariant named '" + std::string(name) + "' for " + std::string(to_string(equation_)));
}

void SemiDiscretization::check(const Vector& u, const char* what) const {
  require_size(static_cast<std::size_t>(u.size()), grid_.n, what);
}

Vector SemiDiscretization::elliptic_solve(const Vector& x) const {
  if (!elliptic_) throw ConfigError("elliptic_solve: not a BBM semidiscretization");
  check(x, "elliptic_solve");
  return elliptic_->solve(x);
}

Vector SemiDiscretization::rhs(const Vector& u) const {
  check(u, "SemiDiscretization::rhs");
  switch (equation_) {
    case Equation::burgers:
      return burgers_rhs(d1_, u);
    case Equation::kdv:
      return kdv_rhs(d1_, *d3_, u);
    case Equation::bbm_split: {
      const Vector du = d1_.apply(u);
      const Vector inner = (d1_.apply(u.cwiseProduct(u)) + u.cwiseProduct(du)) / 3.0 + du;
      return -elliptic_->solve(inner);
    }
    case Equation::bbm_central: {
      const Vector g = 0.5 * u.cwiseProduct(u) + u;
      return -(*elliptic_d1_ * g);
    }
  }
  return {};
}

Matrix SemiDiscretization::jacobian(const Vector& u) const {
  check(u, "SemiDiscretization::jacobian");
  const Matrix& d = d1_.matrix();
  switch (equation_) {
    case Equation::burgers:
      return burgers_jacobian(d1_, u);
    case Equation::kdv:
      return burgers_jacobian(d1_, u) - d3_->matrix();
    case Equation::bbm_split: {
      Matrix inner = (2.0 / 3.0) * (d * u.asDiagonal());
      inner += (1.0 / 3.0) * (u.asDiagonal() * d);
      inner.diagonal() += (d * u) / 3.0;
      inner += d;
      return -elliptic_->solve(inner);
    }
    case Equation::bbm_central: {
      const Vector w = Vector::Ones(u.size()) + u;
      return -(*elliptic_d1_ * w.asDiagonal());
    }
  }
  return {};
}

Vector SemiDiscretization::jacobian_apply(const Vector& u, const Vector& v) const {
  check(u, "SemiDiscretization::jacobian_apply");
  check(v, "SemiDiscretization::jacobian_apply");
  switch (equation_) {
    case Equation::burgers:
      return burgers_jacobian_apply(d1_, u, v);
    case Equation::kdv:
      return burgers_jacobian_apply(d1_, u, v) - d3_->apply(v);
    case Equation::bbm_split: {
      const Vector dv = d1_.apply(v);
      const Vector inner = (2.0 / 3.0) * d1_.apply(u.cwiseProduct(v)) +
                           (u.cwiseProduct(dv) + v.cwiseProduct(d1_.apply(u))) / 3.0 + dv;
      return -elliptic_->solve(inner);
    }
    case Equation::bbm_central:
      return -(*elliptic_d1_ * (v + u.cwiseProduct(v)));
  }
  return {};
}

Vector bbm_split_rhs(const SemiDiscretization& sd, const Vector& u) {
  if (sd.equation() != Equation::bbm_split) throw ConfigError("bbm_split_rhs: wrong semidiscretization");
  return sd.rhs(u);
}

Vector bbm_central_rhs(const SemiDiscretization& sd, const Vector& u) {
  if (sd.equation() != Equation::bbm_central) throw ConfigError("bbm_central_rhs: wrong semidiscretization");
  return sd.rhs(u);
}

}  // namespace entropic
