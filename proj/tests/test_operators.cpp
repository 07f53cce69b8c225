#include "doctest.h"
#include "oracles.hpp"

#include "entropic/operators.hpp"

#include <cmath>
#include <numbers>

using namespace entropic;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Max error of D applied to sin(2πx/L) against the analytic derivative.
double sine_error(const GridOperator& d, double length, int m) {
  const std::size_t n = d.size();
  const Vector x = periodic_nodes(0.0, length, n);
  const double k = 2.0 * pi / length;
  Vector u(x.size()), exact(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u[i] = std::sin(k * x[i]);
    switch (m) {
      case 1: exact[i] = k * std::cos(k * x[i]); break;
      case 2: exact[i] = -k * k * std::sin(k * x[i]); break;
      default: exact[i] = -k * k * k * std::cos(k * x[i]); break;
    }
  }
  return (d.apply(u) - exact).cwiseAbs().maxCoeff();
}

std::vector<GridOperator> all_operators() {
  std::vector<GridOperator> ops;
  for (int m = 1; m <= 3; ++m) {
    for (int p : {2, 4, 6, 8}) ops.push_back(make_central_fd(m, p, 40, 0.5));
  }
  ops.push_back(make_fourier(1, 32, 20.0));
  ops.push_back(make_fourier(2, 32, 20.0));
  return ops;
}

}  // namespace

TEST_CASE("central weights match the Taylor table") {
  for (int m = 1; m <= 3; ++m) {
    for (int p : {2, 4, 6, 8}) {
      const int half = (m + 1) / 2 + p / 2 - 1;
      const auto w = central_weights(m, half);
      const auto ref = oracle::taylor_weights(m, half);
      REQUIRE(w.size() == ref.size());
      for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fourth-order first derivative stencil") {
  const double dx = 0.25;
  const auto d = make_central_fd(1, 4, 16, dx);
  const std::vector<double> expected = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  REQUIRE(d.stencil().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(d.stencil()[i] == doctest::Approx(expected[i] / dx).epsilon(1e-14));
  }
}

TEST_CASE("structural properties of every operator") {
  for (const auto& d : all_operators()) {
    CAPTURE(d.deriv_order());
    const Matrix& a = d.matrix();
    const double scale = max_abs(a);
    if (d.symmetry() == Symmetry::skew) {
      CHECK(max_abs(a + a.transpose()) <= 1e-13 * scale);
      const MassMatrix m = d.mass();
      for (unsigned s = 0; s < 5; ++s) {
        const Vector u = oracle::random_vector(a.rows(), s);
        CHECK(std::abs(m.inner(u, d.apply(u))) <= 1e-12 * m.inner(u, u));
      }
    } else {
      CHECK(max_abs(a - a.transpose()) <= 1e-13 * scale);
      for (unsigned s = 0; s < 20; ++s) {
        const Vector v = oracle::random_vector(a.rows(), 100 + s);
        CHECK(v.dot(a * v) <= 1e-10 * v.squaredNorm());
      }
    }
    CHECK(d.apply(Vector::Ones(a.rows())).norm() <= 1e-12 * std::max(1.0, scale));
    CHECK(d.apply(Vector::Zero(a.rows())).norm() == 0.0);
    for (Eigen::Index i = 1; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        REQUIRE(std::abs(a(i, j) - a(0, (j - i + a.cols()) % a.cols())) <= 1e-14 * scale);
      }
    }
  }
}

TEST_CASE("mass matrix has uniform positive weights") {
  const auto d = make_fourier(1, 64, 180.0);
  const MassMatrix m = d.mass();
  CHECK(m.weights.minCoeff() == doctest::Approx(180.0 / 64));
  CHECK(m.weights.maxCoeff() == doctest::Approx(180.0 / 64));
  CHECK(m.total() == doctest::Approx(180.0));
}

TEST_CASE("apply matches the dense product and the convolution oracle") {
  for (int m = 1; m <= 3; ++m) {
    const double dx = 0.1;
    const auto d = make_central_fd(m, 4, 50, dx);
    const Vector u = oracle::random_vector(50, 7 + m);
    const Vector dense = d.matrix() * u;
    CHECK((d.apply(u) - dense).norm() <= 1e-13 * dense.norm());

    const int half = (m + 1) / 2 + 1;
    const Vector ref = oracle::convolve(oracle::taylor_weights(m, half), m, u, dx);
    CHECK((d.apply(u) - ref).norm() <= 1e-11 * ref.norm());
    CHECK((d.matrix() - oracle::circulant(oracle::taylor_weights(m, half), m, 50, dx)).cwiseAbs().maxCoeff() <=
          1e-10 * max_abs(d.matrix()));
  }
  // Linear ramp with its periodic jump.
  const auto d1 = make_central_fd(1, 4, 20, 1.0);
  Vector ramp(20);
  for (int i = 0; i < 20; ++i) ramp[i] = i;
  const Vector ref = oracle::convolve(oracle::taylor_weights(1, 2), 1, ramp, 1.0);
  CHECK((d1.apply(ramp) - ref).norm() <= 1e-12 * ref.norm());
  CHECK(d1.apply(ramp)[10] == doctest::Approx(1.0));
}

TEST_CASE("central differences converge at their nominal order") {
  const double length = 20.0;
  for (int m = 1; m <= 3; ++m) {
    for (int p : {2, 4, 6}) {
      CAPTURE(m);
      CAPTURE(p);
      std::vector<double> h, err;
      for (std::size_t n : {16u, 32u, 64u, 128u}) {
        h.push_back(length / n);
        err.push_back(sine_error(make_central_fd(m, p, n, length / n), length, m));
      }
      CHECK(std::abs(oracle::loglog_slope(h, err) - p) <= 0.2);
    }
  }
  // n = 64, L = 20 against C dx^4 with C from the leading truncation term.
  const double dx = 20.0 / 64;
  const double k = 2.0 * pi / 20.0;
  CHECK(sine_error(make_central_fd(1, 4, 64, dx), 20.0, 1) <= 2.0 * std::pow(k, 5) * std::pow(dx, 4) / 30.0);
}

TEST_CASE("Fourier differentiation is spectrally accurate") {
  const auto d1 = make_fourier(1, 64, 20.0);
  const auto d2 = make_fourier(2, 64, 20.0);
  CHECK(sine_error(d1, 20.0, 1) <= 1e-11);
  CHECK(sine_error(d2, 20.0, 2) <= 1e-10);
  CHECK(max_abs(d1.matrix() * d2.matrix() - d2.matrix() * d1.matrix()) <= 1e-10);
  CHECK(d1.symmetry() == Symmetry::skew);
  CHECK(d2.symmetry() == Symmetry::symmetric_nsd);
}

TEST_CASE("operator construction rejects bad arguments") {
  CHECK_THROWS_AS(make_central_fd(4, 4, 20, 0.1), ConfigError);
  CHECK_THROWS_AS(make_central_fd(1, 3, 20, 0.1), ConfigError);
  CHECK_THROWS_AS(make_central_fd(1, 4, 4, 0.1), ConfigError);
  CHECK_THROWS_AS(make_central_fd(1, 4, 20, 0.0), ConfigError);
  CHECK_THROWS_AS(make_fourier(1, 33, 20.0), ConfigError);
  CHECK_THROWS_AS(make_fourier(3, 32, 20.0), ConfigError);
  CHECK_THROWS_AS(make_central_fd(1, 4, 20, 0.1).apply(Vector::Zero(19)), DimensionError);
}

TEST_CASE("periodic nodes cover (x_min, x_max]") {
  const Vector x = periodic_nodes(-10.0, 10.0, 200);
  CHECK(x[0] == doctest::Approx(-9.9));
  CHECK(x[199] == doctest::Approx(10.0));
}
