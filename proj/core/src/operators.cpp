#include "entropic/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace entropic {

std::string_view to_string(Symmetry s) {
  return s == Symmetry::skew ? "skew" : "symmetric-nsd";
}

std::string_view to_string(OperatorFamily f) {
  return f == OperatorFamily::central_fd ? "central-fd" : "fourier";
}

double MassMatrix::inner(const Vector& u, const Vector& v) const {
  require_size(u.size(), weights.size(), "MassMatrix::inner");
  require_size(v.size(), weights.size(), "MassMatrix::inner");
  return (weights.array() * u.array() * v.array()).sum();
}

double MassMatrix::norm(const Vector& u) const { return std::sqrt(inner(u, u)); }

GridOperator::GridOperator(Matrix m, double dx, int order, Symmetry sym, OperatorFamily fam,
                           std::vector<double> stencil)
    : n_(static_cast<std::size_t>(m.rows())),
      dx_(dx),
      deriv_order_(order),
      symmetry_(sym),
      family_(fam),
      matrix_(std::move(m)),
      stencil_(std::move(stencil)) {}

MassMatrix GridOperator::mass() const {
  return MassMatrix{Vector::Constant(static_cast<Eigen::Index>(n_), dx_)};
}

Vector GridOperator::apply(const Vector& u) const {
  require_size(u.size(), matrix_.cols(), "GridOperator::apply");
  if (stencil_.empty()) return matrix_ * u;
  // banded circulant: wrap only near the ends
  const auto n = u.size();
  const auto half = static_cast<Eigen::Index>(stencil_.size() / 2);
  Vector out = Vector::Zero(n);
  for (Eigen::Index k = -half; k <= half; ++k) {
    const double w = stencil_[static_cast<std::size_t>(k + half)];
    if (w == 0.0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index j = i + k;
      if (j < 0) j += n;
      if (j >= n) j -= n;
      out[i] += w * u[j];
    }
  }
  return out;
}

std::vector<double> central_weights(int deriv_order, int half_width) {
  const int npts = 2 * half_width + 1;
  const int m = deriv_order;
  // c[j][k]: weight of node j for the k-th derivative
  std::vector<std::vector<long double>> c(npts, std::vector<long double>(m + 1, 0.0L));
  auto x = [half_width](int j) { return static_cast<long double>(j - half_width); };
  const long double z = 0.0L;

  long double c1 = 1.0L;
  long double c4 = x(0) - z;
  c[0][0] = 1.0L;
  for (int i = 1; i < npts; ++i) {
    const int mn = std::min(i, m);
    long double c2 = 1.0L;
    const long double c5 = c4;
    c4 = x(i) - z;
    for (int j = 0; j < i; ++j) {
      const long double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }

  std::vector<double> w(npts);
  for (int j = 0; j < npts; ++j) w[j] = static_cast<double>(c[j][m]);
  return w;
}

namespace {

int stencil_half_width(int deriv_order, int accuracy_order) {
  const int npts = 2 * ((deriv_order + 1) / 2) - 1 + accuracy_order;
  return (npts - 1) / 2;
}

// Dense circulant matrix whose row i is row0 shifted right by i.
Matrix circulant(const std::vector<double>& row0) {
  const auto n = static_cast<Eigen::Index>(row0.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) m(i, (i + k) % n) = row0[static_cast<std::size_t>(k)];
  }
  return m;
}

}  // namespace

GridOperator make_central_fd(int deriv_order, int accuracy_order, std::size_t n, double dx) {
  if (deriv_order < 1 || deriv_order > 3) {
    throw ConfigError("make_central_fd: deriv_order must be 1, 2 or 3");
  }
  if (accuracy_order < 2 || accuracy_order > 8 || accuracy_order % 2 != 0) {
    throw ConfigError("make_central_fd: accuracy_order must be one of 2, 4, 6, 8");
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("make_central_fd: dx must be positive");
  const int half = stencil_half_width(deriv_order, accuracy_order);
  const std::size_t width = static_cast<std::size_t>(2 * half + 1);
  if (n <= width) {
    throw ConfigError("make_central_fd: n = " + std::to_string(n) +
                      " too small for stencil of width " + std::to_string(width));
  }

  std::vector<double> w = central_weights(deriv_order, half);
  const bool odd = deriv_order % 2 == 1;
  // enforce exact (anti)symmetry and exact annihilation of constants
  for (int k = 1; k <= half; ++k) {
    double& wp = w[static_cast<std::size_t>(half + k)];
    double& wm = w[static_cast<std::size_t>(half - k)];
    const double a = odd ? 0.5 * (wp - wm) : 0.5 * (wp + wm);
    wp = a;
    wm = odd ? -a : a;
  }
  if (odd) {
    w[static_cast<std::size_t>(half)] = 0.0;
  } else {
    double s = 0.0;
    for (int k = 1; k <= half; ++k) s += 2.0 * w[static_cast<std::size_t>(half + k)];
    w[static_cast<std::size_t>(half)] = -s;
  }
  const double scale = std::pow(dx, -deriv_order);
  for (double& v : w) v *= scale;

  std::vector<double> row0(n, 0.0);
  for (int k = -half; k <= half; ++k) {
    const auto col = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    row0[col] += w[static_cast<std::size_t>(k + half)];
  }
  return GridOperator(circulant(row0), dx, deriv_order, odd ? Symmetry::skew : Symmetry::symmetric_nsd,
                      OperatorFamily::central_fd, std::move(w));
}

GridOperator make_fourier(int deriv_order, std::size_t n, double domain_length) {
  if (deriv_order != 1 && deriv_order != 2) throw ConfigError("make_fourier: deriv_order must be 1 or 2");
  if (n < 2 || n % 2 != 0) throw ConfigError("make_fourier: n must be even and >= 2");
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw ConfigError("make_fourier: domain length must be positive");
  }
  constexpr double pi = std::numbers::pi;
  const double nd = static_cast<double>(n);
  const double dx = domain_length / nd;
  const std::size_t half = n / 2;
  std::vector<double> row0(n, 0.0);

  if (deriv_order == 1) {
    const double scale = pi / domain_length;
    for (std::size_t k = 1; k < half; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      // row 0, column k holds the entry for j - k = -k
      const double v = -scale * sign / std::tan(pi * static_cast<double>(k) / nd);
      row0[k] = v;
      row0[n - k] = -v;
    }
    return GridOperator(circulant(row0), dx, 1, Symmetry::skew, OperatorFamily::fourier, {});
  }

  const double scale = std::pow(2.0 * pi / domain_length, 2);
  double offsum = 0.0;
  for (std::size_t k = 1; k <= half; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double s = std::sin(pi * static_cast<double>(k) / nd);
    const double v = -scale * sign / (2.0 * s * s);
    row0[k] = v;
    if (k != half) {
      row0[n - k] = v;
      offsum += 2.0 * v;
    } else {
      offsum += v;
    }
  }
  // analytically -scale (n^2/12 + 1/6); the negative row sum keeps D2 1 = 0 exact
  row0[0] = -offsum;
  return GridOperator(circulant(row0), dx, 2, Symmetry::symmetric_nsd, OperatorFamily::fourier, {});
}

Vector periodic_nodes(double x_min, double x_max, std::size_t n) {
  if (!(x_max > x_min)) throw ConfigError("periodic_nodes: x_max must exceed x_min");
  if (n == 0) throw ConfigError("periodic_nodes: n must be positive");
  const double dx = (x_max - x_min) / static_cast<double>(n);
  Vector x(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) x[static_cast<Eigen::Index>(j)] = x_min + static_cast<double>(j + 1) * dx;
  return x;
}

}  // namespace entropic
