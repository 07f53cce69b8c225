#ifndef ENTROPIC_OPERATORS_HPP
#define ENTROPIC_OPERATORS_HPP

#include "entropic/types.hpp"

#include <string_view>
#include <vector>

namespace entropic {

enum class Symmetry { skew, symmetric_nsd };
enum class OperatorFamily { central_fd, fourier };

std::string_view to_string(Symmetry s);
std::string_view to_string(OperatorFamily f);

/// Diagonal quadrature weights of a periodic grid.
struct MassMatrix {
  Vector weights;

  /// uᵀ M v
  double inner(const Vector& u, const Vector& v) const;
  /// sqrt(uᵀ M u)
  double norm(const Vector& u) const;
  double total() const { return weights.sum(); }
};

/// Periodic derivative operator stored as a dense circulant matrix.
///
/// Skew operators satisfy D = -Dᵀ and symmetric ones are negative
/// semidefinite. Both families use the uniform mass matrix M = dx I, so
/// M-skewness and plain skewness coincide. Instances are immutable.
class GridOperator {
 public:
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  int deriv_order() const { return deriv_order_; }
  Symmetry symmetry() const { return symmetry_; }
  OperatorFamily family() const { return family_; }
  const Matrix& matrix() const { return matrix_; }
  MassMatrix mass() const;

  /// Matrix-vector product D u.
  Vector apply(const Vector& u) const;

  /// Stencil weights (offsets -half..half, scaled by dx^-order). Empty for
  /// the Fourier family, whose rows are dense.
  const std::vector<double>& stencil() const { return stencil_; }

 private:
  friend GridOperator make_central_fd(int, int, std::size_t, double);
  friend GridOperator make_fourier(int, std::size_t, double);

  GridOperator(Matrix m, double dx, int order, Symmetry sym, OperatorFamily fam,
               std::vector<double> stencil);

  std::size_t n_;
  double dx_;
  int deriv_order_;
  Symmetry symmetry_;
  OperatorFamily family_;
  Matrix matrix_;
  std::vector<double> stencil_;
};

/// Weights of the centered finite-difference formula on offsets
/// -half_width..half_width for the given derivative order (unit spacing).
/// Fornberg's recursion.
std::vector<double> central_weights(int deriv_order, int half_width);

/// Classical central finite differences on a periodic grid of n nodes.
/// Odd derivative orders give skew operators, order 2 a symmetric
/// negative-semidefinite one. Supported accuracy orders: 2, 4, 6, 8.
GridOperator make_central_fd(int deriv_order, int accuracy_order, std::size_t n, double dx);

/// Fourier collocation differentiation on n (even) equispaced nodes of a
/// periodic domain of length L. deriv_order 2 is the exact collocation
/// second-derivative matrix, not the square of the first.
GridOperator make_fourier(int deriv_order, std::size_t n, double domain_length);

/// Same as op.apply(u).
inline Vector apply(const GridOperator& op, const Vector& u) { return op.apply(u); }

/// Periodic grid nodes x_j = x_min + j dx, j = 1..n, covering (x_min, x_max].
Vector periodic_nodes(double x_min, double x_max, std::size_t n);

}  // namespace entropic

#endif  // ENTROPIC_OPERATORS_HPP
