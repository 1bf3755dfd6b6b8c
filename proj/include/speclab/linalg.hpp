#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "speclab/types.hpp"

namespace speclab::linalg {

struct Options {
  // Eigenvalue pairs closer than degeneracy_rel * operator_norm(A) mark the
  // system degenerate; projection norms are then unreliable and downstream
  // consumers must reject or exclude the sample.
  double degeneracy_rel = 1e-10;
  // QR iteration budget, in sweeps per matrix row.
  Index max_iterations_per_row = 100;
  // LU pivots below this magnitude count as singular.
  double singular_pivot = 1e-300;
};

struct EigenSystem {
  Vector eigenvalues;  // sorted by (Re, Im) ascending
  Matrix V;            // right eigenvectors, unit-norm columns
  Matrix Vinv;
  double residual = 0.0;  // operator-norm relative residual of A V - V D
  double min_gap = std::numeric_limits<double>::infinity();
  bool degenerate = false;

  [[nodiscard]] Index size() const { return eigenvalues.size(); }
};

namespace detail {

[[nodiscard]] inline bool is_real(const Matrix& a) { return a.imag().isZero(0.0); }

template <class MatrixType>
[[nodiscard]] double largest_singular_value(const MatrixType& a) {
  if (a.rows() <= 32 && a.cols() <= 32) {
    Eigen::JacobiSVD<MatrixType> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<MatrixType> svd(a);
  return svd.singularValues()(0);
}

template <class MatrixType>
[[nodiscard]] double smallest_singular_value(const MatrixType& a) {
  if (a.rows() <= 32 && a.cols() <= 32) {
    Eigen::JacobiSVD<MatrixType> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
  }
  Eigen::BDCSVD<MatrixType> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace detail

// Largest singular value.
[[nodiscard]] inline double operator_norm(const Matrix& a) {
  require_finite(a, "operator_norm");
  if (a.size() == 0) throw ShapeError("operator_norm: empty matrix");
  if (detail::is_real(a)) return detail::largest_singular_value<RealMatrix>(a.real());
  return detail::largest_singular_value<Matrix>(a);
}

// Smallest singular value; 0 iff the matrix is singular to working precision.
[[nodiscard]] inline double sigma_min(const Matrix& a) {
  require_finite(a, "sigma_min");
  if (a.size() == 0) throw ShapeError("sigma_min: empty matrix");
  if (detail::is_real(a)) return detail::smallest_singular_value<RealMatrix>(a.real());
  return detail::smallest_singular_value<Matrix>(a);
}

[[nodiscard]] inline Matrix invert(const Matrix& a, const Options& opt = {}) {
  require_square_finite(a, "invert");
  Eigen::PartialPivLU<Matrix> lu(a);
  const auto& pivots = lu.matrixLU().diagonal();
  for (Index i = 0; i < pivots.size(); ++i) {
    if (std::abs(pivots(i)) < opt.singular_pivot)
      throw SingularError("invert: pivot " + std::to_string(i) + " below threshold");
  }
  return lu.inverse();
}

// Eigenvalues only, sorted by (Re, Im) ascending.  Cheaper than the full
// decomposition when eigenvectors are not needed (spectral sweeps, grids).
[[nodiscard]] inline Vector eigenvalues_sorted(const Matrix& a, const Options& opt = {}) {
  require_square_finite(a, "eigenvalues_sorted");
  const Index n = a.rows();
  Vector values(n);
  if (detail::is_real(a)) {
    Eigen::EigenSolver<RealMatrix> solver;
    solver.setMaxIterations(opt.max_iterations_per_row * n);
    solver.compute(a.real(), false);
    if (solver.info() != Eigen::Success)
      throw NonConvergenceError("eigenvalues_sorted: QR iteration cap reached");
    values = solver.eigenvalues();
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver;
    solver.setMaxIterations(opt.max_iterations_per_row * n);
    solver.compute(a, false);
    if (solver.info() != Eigen::Success)
      throw NonConvergenceError("eigenvalues_sorted: QR iteration cap reached");
    values = solver.eigenvalues();
  }
  std::sort(values.data(), values.data() + n, [](Complex lhs, Complex rhs) {
    if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
    return lhs.imag() < rhs.imag();
  });
  return values;
}

// Dense non-symmetric eigendecomposition: Hessenberg reduction plus shifted QR
// with deflation, unit-norm columns, deterministic (Re, Im) eigenvalue order,
// and an attached residual diagnostic.  Real input takes the real-Schur path.
[[nodiscard]] inline EigenSystem eigendecompose(const Matrix& a, const Options& opt = {}) {
  require_square_finite(a, "eigendecompose");
  const Index n = a.rows();

  Vector values(n);
  Matrix vectors(n, n);
  if (detail::is_real(a)) {
    Eigen::EigenSolver<RealMatrix> solver;
    solver.setMaxIterations(opt.max_iterations_per_row * n);
    solver.compute(a.real(), true);
    if (solver.info() != Eigen::Success)
      throw NonConvergenceError("eigendecompose: QR iteration cap reached");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver;
    solver.setMaxIterations(opt.max_iterations_per_row * n);
    solver.compute(a, true);
    if (solver.info() != Eigen::Success)
      throw NonConvergenceError("eigendecompose: QR iteration cap reached");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    if (values(i).real() != values(j).real()) return values(i).real() < values(j).real();
    return values(i).imag() < values(j).imag();
  });

  EigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.V.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    sys.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    sys.V.col(k) = vectors.col(order[static_cast<std::size_t>(k)]).normalized();
  }
  sys.Vinv = invert(sys.V, opt);

  const double norm_a = operator_norm(a);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      sys.min_gap = std::min(sys.min_gap, std::abs(sys.eigenvalues(i) - sys.eigenvalues(j)));
  sys.degenerate = n > 1 && sys.min_gap <= opt.degeneracy_rel * norm_a;

  const Matrix defect = a * sys.V - sys.V * sys.eigenvalues.asDiagonal();
  const double defect_norm = operator_norm(defect);
  sys.residual = norm_a > 0 ? defect_norm / norm_a : defect_norm;
  return sys;
}

}  // namespace speclab::linalg
