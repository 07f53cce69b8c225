#ifndef ENTROPIC_LINALG_HPP
#define ENTROPIC_LINALG_HPP

#include "entropic/types.hpp"

#include <functional>
#include <vector>

namespace entropic {

/// LU factorization with partial pivoting, PA = LU.
class DenseFactorization {
 public:
  /// Throws SingularMatrixError if a pivot is negligible relative to max|A|.
  explicit DenseFactorization(const Matrix& a);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }

  Matrix lower() const;
  Matrix upper() const;
  Matrix permutation() const;

 private:
  Eigen::PartialPivLU<Matrix> lu_;
};

/// Solve A x = b by dense LU.
Vector lu_solve(const Matrix& a, const Vector& b);

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;
  /// ‖b − A x_j‖ / ‖b‖ for j = 0..iterations
  std::vector<double> residual_history;
  bool converged = false;
};

struct GmresResult {
  Vector x;
  KrylovReport report;
  /// Orthonormal Arnoldi vectors, one per column.
  Matrix basis;
};

using LinearAction = std::function<Vector(const Vector&)>;

/// Unrestarted GMRES with classical Gram–Schmidt Arnoldi (selective reorthogonalization) and Givens
/// rotations. Stops once ‖b − A x‖ ≤ rel_tol ‖b‖ or after max_dim
/// Arnoldi steps. A lucky breakdown counts as convergence.
GmresResult gmres(const LinearAction& a, const Vector& b, const Vector& x0, double rel_tol,
                  int max_dim);

}  // namespace entropic

#endif  // ENTROPIC_LINALG_HPP
