#ifndef ENTROPIC_TYPES_HPP
#define ENTROPIC_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when operand sizes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown for invalid construction parameters or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a factorization meets a matrix singular to working precision.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_size(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(what) + ": expected size " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

inline void require_size(Eigen::Index got, Eigen::Index expected, const char* what) {
  require_size(static_cast<std::size_t>(got), static_cast<std::size_t>(expected), what);
}

}  // namespace entropic

#endif  // ENTROPIC_TYPES_HPP
