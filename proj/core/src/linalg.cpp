#include "entropic/linalg.hpp"

#include <cmath>
#include <limits>

namespace entropic {

DenseFactorization::DenseFactorization(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("DenseFactorization: matrix must be square");
  if (a.rows() == 0) throw DimensionError("DenseFactorization: empty matrix");
  lu_.compute(a);
  const double amax = a.cwiseAbs().maxCoeff();
  const double tiny = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * amax;
  const auto diag = lu_.matrixLU().diagonal().cwiseAbs();
  if (!(amax > 0.0) || !(diag.minCoeff() > tiny)) {
    throw SingularMatrixError("DenseFactorization: matrix is singular to working precision");
  }
}

Vector DenseFactorization::solve(const Vector& b) const {
  require_size(b.size(), lu_.rows(), "DenseFactorization::solve");
  return lu_.solve(b);
}

Matrix DenseFactorization::solve(const Matrix& b) const {
  require_size(b.rows(), lu_.rows(), "DenseFactorization::solve");
  return lu_.solve(b);
}

Matrix DenseFactorization::lower() const {
  Matrix l = lu_.matrixLU().triangularView<Eigen::UnitLower>();
  return l;
}

Matrix DenseFactorization::upper() const {
  Matrix u = lu_.matrixLU().triangularView<Eigen::Upper>();
  return u;
}

Matrix DenseFactorization::permutation() const { return lu_.permutationP().toDenseMatrix().cast<double>(); }

Vector lu_solve(const Matrix& a, const Vector& b) {
  require_size(b.size(), a.rows(), "lu_solve");
  return DenseFactorization(a).solve(b);
}

GmresResult gmres(const LinearAction& a, const Vector& b, const Vector& x0, double rel_tol,
                  int max_dim) {
  const Eigen::Index n = b.size();
  require_size(x0.size(), n, "gmres");
  if (max_dim < 1 || max_dim > n) throw ConfigError("gmres: max_dim must lie in [1, n]");
  if (!(rel_tol >= 0.0)) throw ConfigError("gmres: rel_tol must be non-negative");

  GmresResult out;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x = Vector::Zero(n);
    out.report.converged = true;
    out.report.residual_history = {0.0};
    return out;
  }

  Vector r = b - a(x0);
  const double beta = r.norm();
  out.report.residual_history.push_back(beta / bnorm);
  if (beta <= rel_tol * bnorm) {
    out.x = x0;
    out.report.relative_residual = beta / bnorm;
    out.report.converged = true;
    return out;
  }

  Matrix v(n, max_dim + 1);
  Matrix h = Matrix::Zero(max_dim + 1, max_dim);
  Vector cs = Vector::Zero(max_dim);
  Vector sn = Vector::Zero(max_dim);
  Vector g = Vector::Zero(max_dim + 1);
  v.col(0) = r / beta;
  g[0] = beta;

  int k = 0;
  bool done = false;
  while (k < max_dim && !done) {
    Vector w = a(v.col(k));
    require_size(w.size(), n, "gmres: operator output");
    const double wnorm0 = w.norm();
    // Classical Gram-Schmidt as block products, repeated once when the first
    // pass cancels more than 1 - 1/sqrt(2) of the norm (DGKS criterion).
    for (int pass = 0; pass < 2; ++pass) {
      const double before = w.norm();
      const Vector c = v.leftCols(k + 1).transpose() * w;
      h.col(k).head(k + 1) += c;
      w.noalias() -= v.leftCols(k + 1) * c;
      if (w.norm() > std::sqrt(0.5) * before) break;
    }
    const double hnext = w.norm();
    h(k + 1, k) = hnext;
    const bool breakdown = hnext <= 1e-14 * std::max(wnorm0, 1e-300);
    if (!breakdown) v.col(k + 1) = w / hnext;

    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
      h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
      h(i, k) = t;
    }
    const double denom = std::hypot(h(k, k), h(k + 1, k));
    cs[k] = h(k, k) / denom;
    sn[k] = h(k + 1, k) / denom;
    h(k, k) = denom;
    h(k + 1, k) = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];

    ++k;
    const double rel = std::abs(g[k]) / bnorm;
    out.report.residual_history.push_back(rel);
    if (rel <= rel_tol || breakdown) done = true;
  }

  Vector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  out.x = x0 + v.leftCols(k) * y;
  out.report.iterations = k;
  out.report.relative_residual = out.report.residual_history.back();
  out.report.converged = done;
  out.basis = v.leftCols(k);
  return out;
}

}  // namespace entropic
