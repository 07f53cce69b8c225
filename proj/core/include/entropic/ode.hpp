#ifndef ENTROPIC_ODE_HPP
#define ENTROPIC_ODE_HPP

#include "entropic/types.hpp"

namespace entropic {

/// Autonomous system u' = f(u) with an analytic Jacobian.
class Ode {
 public:
  virtual ~Ode() = default;

  virtual std::size_t size() const = 0;
  virtual Vector rhs(const Vector& u) const = 0;
  /// Dense f'(u).
  virtual Matrix jacobian(const Vector& u) const = 0;
  /// f'(u) v without assembling the matrix.
  virtual Vector jacobian_apply(const Vector& u, const Vector& v) const { return jacobian(u) * v; }
  /// Quadrature weight used in discrete norms (dx on a uniform grid).
  virtual double weight() const { return 1.0; }
};

}  // namespace entropic

#endif  // ENTROPIC_ODE_HPP
