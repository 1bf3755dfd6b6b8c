#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace speclab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
  using Error::Error;
};
struct NonFiniteError : Error {
  using Error::Error;
};
struct SingularError : Error {
  using Error::Error;
};
struct NonConvergenceError : Error {
  using Error::Error;
};
struct DegenerateInputError : Error {
  using Error::Error;
};
struct DegenerateEllipseError : Error {
  using Error::Error;
};
struct RootConditionError : Error {
  using Error::Error;
};
struct DegenerateRootsError : Error {
  using Error::Error;
};
struct NotNormalizedError : Error {
  using Error::Error;
};
struct EmptyInputError : Error {
  using Error::Error;
};
struct InsufficientDataError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

inline void require_square(const Matrix& a, const char* where) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw ShapeError(std::string(where) + ": matrix must be square and non-empty, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

inline void require_finite(const Matrix& a, const char* where) {
  if (!a.allFinite()) throw NonFiniteError(std::string(where) + ": matrix has NaN or Inf entries");
}

inline void require_square_finite(const Matrix& a, const char* where) {
  require_square(a, where);
  require_finite(a, where);
}

}  // namespace speclab
