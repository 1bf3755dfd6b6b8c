#pragma once

#include <cmath>
#include <string>

#include "speclab/geometry.hpp"
#include "speclab/models.hpp"
#include "speclab/types.hpp"

namespace speclab::eigvec {

struct ConstructedVector {
  Vector f;                       // unit norm
  Index first_site = 0;           // site label of f(0)
  double residual_interior = 0.0; // truncation rows that cannot be satisfied excluded
  double residual_full = 0.0;     // every row counted
  Complex u1, u2;                 // contracting roots (w1, w2 for the half-line case)
  Complex v;                      // expanding root (step-potential case only)
};

namespace detail {

[[nodiscard]] inline std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  const Complex s = (std::abs(-b + disc) >= std::abs(-b - disc)) ? -b + disc : -b - disc;
  const Complex r1 = s / (2.0 * a);
  const Complex r2 = c / (a * r1);
  return {r1, r2};
}

}  // namespace detail

// Decaying eigenvector of the step-potential operator (diagonal alpha for
// sites >= step_at, beta below) at eigenvalue lambda: f = v^m on the beta
// side, c1 u1^m + c2 u2^m on the alpha side, with m the site index shifted so
// the step sits at m = 1.  Requires lambda inside the alpha-shifted ellipse
// and outside the beta-shifted one; the roots must satisfy |u| < 1 < |v|.
[[nodiscard]] inline ConstructedVector step_eigenvector(double g, double alpha, double beta,
                                                     Complex lambda, Index half_width,
                                                     Index step_at = 1) {
  if (!(g > 0)) throw ConfigError("step_eigenvector: g must be > 0");
  if (half_width < 2) throw ConfigError("step_eigenvector: half_width must be >= 2");
  if (step_at <= -half_width + 1 || step_at >= half_width)
    throw ConfigError("step_eigenvector: both interface rows must lie inside the truncation");

  const auto ellipse = geometry::HoppingEllipse::from_g(g);
  if (geometry::ellipse_membership(lambda - alpha, ellipse) != geometry::Membership::Interior)
    throw RootConditionError("step_eigenvector: lambda - alpha is not interior to the ellipse");
  if (geometry::ellipse_membership(lambda - beta, ellipse) != geometry::Membership::Exterior)
    throw RootConditionError("step_eigenvector: lambda - beta is not exterior to the ellipse");

  const double eg = std::exp(g);
  const double emg = std::exp(-g);
  const auto [u1, u2] = detail::quadratic_roots(eg, alpha - lambda, emg);
  if (std::abs(u1 - u2) * std::abs(u1 - u2) <=
      1e-14 * std::max(1.0, std::norm(u1) + std::norm(u2)))
    throw DegenerateRootsError("step_eigenvector: coincident contracting roots");
  const auto [va, vb] = detail::quadratic_roots(eg, beta - lambda, emg);
  const Complex v = std::abs(va) >= std::abs(vb) ? va : vb;

  const double margin = 1e-12;
  if (!(std::abs(u1) < 1.0 - margin) || !(std::abs(u2) < 1.0 - margin))
    throw RootConditionError("step_eigenvector: contracting roots not strictly inside the unit disc");
  if (!(std::abs(v) > 1.0 + margin))
    throw RootConditionError("step_eigenvector: no strictly expanding root on the beta side");

  // Impose the recurrence at the two interface rows m = 0 and m = 1 to fix
  // c1, c2 (all other rows hold identically because u, v solve the symbol
  // equations).
  const Complex m00 = eg * u1;
  const Complex m01 = eg * u2;
  const Complex m10 = eg * u1 * u1 + (alpha - lambda) * u1;
  const Complex m11 = eg * u2 * u2 + (alpha - lambda) * u2;
  const Complex r0 = (lambda - beta) - emg / v;
  const Complex r1 = -emg;
  const Complex det = m00 * m11 - m01 * m10;
  if (std::abs(det) == 0.0)
    throw DegenerateRootsError("step_eigenvector: interface system is singular");
  const Complex c1 = (r0 * m11 - m01 * r1) / det;
  const Complex c2 = (m00 * r1 - r0 * m10) / det;

  const Index n = 2 * half_width + 1;
  ConstructedVector out;
  out.first_site = -half_width;
  out.u1 = u1;
  out.u2 = u2;
  out.v = v;
  out.f.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Index site = i - half_width;
    const auto m = static_cast<double>(site - step_at + 1);
    if (m <= 0)
      out.f(i) = std::pow(v, m);
    else
      out.f(i) = c1 * std::pow(u1, m) + c2 * std::pow(u2, m);
  }
  out.f.normalize();

  const Matrix k = models::step_operator(g, alpha, beta, half_width, step_at);
  Vector defect = k * out.f - lambda * out.f;
  const double scale = std::abs(lambda) > 0 ? std::abs(lambda) : 1.0;
  out.residual_full = defect.norm() / scale;
  defect(0) = 0.0;
  defect(n - 1) = 0.0;
  out.residual_interior = defect.norm() / scale;
  return out;
}

// Decaying eigenvector f_r = w1^r - w2^r (r = 1..N) of the half-line operator
// with subdiagonal x and superdiagonal y at eigenvalue z; requires z interior
// via the root test and x < y so that both roots contract.
[[nodiscard]] inline ConstructedVector halfline_eigenvector(double x, double y, Complex z, Index n) {
  if (n < 2) throw ConfigError("halfline_eigenvector: length must be >= 2");
  if (geometry::ellipse_membership_roots(z, x, y) != geometry::Membership::Interior)
    throw RootConditionError("halfline_eigenvector: z is not interior to the ellipse");
  if (x > y)
    throw RootConditionError("halfline_eigenvector: construction needs x < y (adjoint case mirrored)");

  const auto [w1, w2] = detail::quadratic_roots(Complex(y), -z, Complex(x));
  // Threshold sized so that a focal z rounded to double (discriminant ~1e-15
  // instead of 0, root gap ~1e-8) is still recognised as degenerate.
  if (std::abs(w1 - w2) * std::abs(w1 - w2) <=
      1e-14 * std::max(1.0, std::norm(w1) + std::norm(w2)))
    throw DegenerateRootsError("halfline_eigenvector: coincident roots (z on the focal set)");
  const double margin = 1e-12;
  if (!(std::abs(w1) < 1.0 - margin) || !(std::abs(w2) < 1.0 - margin))
    throw RootConditionError("halfline_eigenvector: roots not strictly inside the unit disc");

  ConstructedVector out;
  out.first_site = 1;
  out.u1 = w1;
  out.u2 = w2;
  out.v = 0.0;
  out.f.resize(n);
  for (Index r = 1; r <= n; ++r)
    out.f(r - 1) = std::pow(w1, static_cast<double>(r)) - std::pow(w2, static_cast<double>(r));
  out.f.normalize();

  const Matrix b = models::build_bidiagonal(n, x, y);
  Vector defect = b * out.f - z * out.f;
  out.residual_full = defect.norm();
  defect(n - 1) = 0.0;  // far boundary row: the infinite operator continues past it
  out.residual_interior = defect.norm();
  return out;
}

// Second central moment of |f|^2 over the site index.
[[nodiscard]] inline double variance_functional(const Vector& f, Index first_site) {
  if (f.size() == 0) throw EmptyInputError("variance_functional: empty vector");
  if (std::abs(f.norm() - 1.0) > 1e-10)
    throw NotNormalizedError("variance_functional: input must be a unit vector");
  double m1 = 0.0;
  double m2 = 0.0;
  for (Index i = 0; i < f.size(); ++i) {
    const double site = static_cast<double>(first_site + i);
    const double mass = std::norm(f(i));
    m1 += site * mass;
    m2 += site * site * mass;
  }
  return m2 - m1 * m1;
}

struct TensorReport {
  double residual_2d = 0.0;     // ‖H (f1 x f2) - (l1 + l2)(f1 x f2)‖
  double residual_bound = 0.0;  // ‖r1‖ + ‖r2‖ for unit factors
  double norm_2d = 0.0;
  bool bound_holds = false;
  ConstructedVector factor1, factor2;
};

// Separable test vector f1 x f2 against the 2D operator with the halved step
// potential A_m = B_m = alpha/2 (m >= 0), beta/2 (m < 0).  The 2D action is
// applied by stencil; the dense (2N+1)^2 matrix is never formed.
[[nodiscard]] inline TensorReport tensor_sum_check(double g, double h, double alpha, double beta,
                                                   Complex lambda1, Complex lambda2,
                                                   Index half_width) {
  TensorReport report;
  report.factor1 = step_eigenvector(g, alpha / 2.0, beta / 2.0, lambda1, half_width, 0);
  report.factor2 = step_eigenvector(h, alpha / 2.0, beta / 2.0, lambda2, half_width, 0);
  const Vector& f1 = report.factor1.f;
  const Vector& f2 = report.factor2.f;
  const Index n = 2 * half_width + 1;

  const double gl = std::exp(-g);
  const double gu = std::exp(g);
  const double hl = std::exp(-h);
  const double hu = std::exp(h);
  const Complex lambda = lambda1 + lambda2;

  const Matrix outer = f1 * f2.transpose();
  report.norm_2d = outer.norm();

  Matrix image = Matrix::Zero(n, n);
  image.bottomRows(n - 1) += gl * outer.topRows(n - 1);    // e^{-g} f_{m-1,n}
  image.topRows(n - 1) += gu * outer.bottomRows(n - 1);    // e^{g}  f_{m+1,n}
  image.rightCols(n - 1) += hl * outer.leftCols(n - 1);    // e^{-h} f_{m,n-1}
  image.leftCols(n - 1) += hu * outer.rightCols(n - 1);    // e^{h}  f_{m,n+1}
  for (Index i = 0; i < n; ++i) {
    const double am = (i - half_width) >= 0 ? alpha / 2.0 : beta / 2.0;
    for (Index j = 0; j < n; ++j) {
      const double bn = (j - half_width) >= 0 ? alpha / 2.0 : beta / 2.0;
      image(i, j) += (am + bn) * outer(i, j);
    }
  }

  report.residual_2d = (image - lambda * outer).norm();
  const double r1 = report.factor1.residual_full *
                    (std::abs(lambda1) > 0 ? std::abs(lambda1) : 1.0);
  const double r2 = report.factor2.residual_full *
                    (std::abs(lambda2) > 0 ? std::abs(lambda2) : 1.0);
  report.residual_bound = r1 + r2;
  report.bound_holds = report.residual_2d <= report.residual_bound + 1e-12;
  return report;
}

}  // namespace speclab::eigvec
