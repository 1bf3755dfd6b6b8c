#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "speclab/types.hpp"

namespace speclab::geometry {

// The curve {p e^{i theta} + q e^{-i theta}}: an ellipse with real semi-axis
// p + q and imaginary semi-axis |p - q|, degenerating to a segment at p = q.
struct HoppingEllipse {
  double p = 1.0;
  double q = 1.0;

  [[nodiscard]] static HoppingEllipse from_g(double g) { return {std::exp(g), std::exp(-g)}; }
  [[nodiscard]] double real_semi_axis() const { return p + q; }
  [[nodiscard]] double imag_semi_axis() const { return std::abs(p - q); }
  [[nodiscard]] bool degenerate() const { return p == q; }
  [[nodiscard]] Complex point(double theta) const {
    return {(p + q) * std::cos(theta), (p - q) * std::sin(theta)};
  }
};

enum class Membership { Interior, Boundary, Exterior };

// Classification by t = (Re z / (p+q))^2 + (Im z / (p-q))^2 against 1.
[[nodiscard]] inline Membership ellipse_membership(Complex z, const HoppingEllipse& e,
                                                   double boundary_tol = 1e-9) {
  if (e.degenerate())
    throw DegenerateEllipseError("ellipse_membership: segment case p == q has no interior");
  const double u = z.real() / (e.p + e.q);
  const double v = z.imag() / (e.p - e.q);
  const double t = u * u + v * v;
  if (std::abs(t - 1.0) <= boundary_tol) return Membership::Boundary;
  return t < 1.0 ? Membership::Interior : Membership::Exterior;
}

// Interior iff both roots of y w^2 - z w + x = 0 lie strictly inside the unit
// disc (modulus margin 1e-12); the x > y case is classified by swapping, the
// ellipse being the same point set.
[[nodiscard]] inline Membership ellipse_membership_roots(Complex z, double x, double y) {
  if (!(x > 0) || !(y > 0))
    throw ConfigError("ellipse_membership_roots: x and y must be positive");
  if (x == y)
    throw DegenerateEllipseError("ellipse_membership_roots: segment case x == y has no interior");
  if (x > y) std::swap(x, y);
  const Complex disc = std::sqrt(z * z - 4.0 * x * y);
  const Complex s = (std::abs(z + disc) >= std::abs(z - disc)) ? z + disc : z - disc;
  const Complex w1 = s / (2.0 * y);
  const Complex w2 = (x / y) / w1;  // root product is x / y
  const double margin = 1.0 - 1e-12;
  return (std::abs(w1) < margin && std::abs(w2) < margin) ? Membership::Interior
                                                          : Membership::Exterior;
}

// True iff z - t lies in the closed filled ellipse of e^{±g} for some real
// shift t in [m_lo, m_hi]; the minimizing shift is the clamped real part.
[[nodiscard]] inline bool inclusion_bound_hull(Complex z, double g, double m_lo, double m_hi,
                                               double tol = 1e-9) {
  if (!(g > 0)) throw ConfigError("inclusion_bound_hull: g must be > 0");
  if (m_lo > m_hi) throw ConfigError("inclusion_bound_hull: empty shift interval");
  const auto e = HoppingEllipse::from_g(g);
  const double t_star = std::clamp(z.real(), m_lo, m_hi);
  const double u = (z.real() - t_star) / e.real_semi_axis();
  const double v = z.imag() / (e.p - e.q);
  return u * u + v * v <= 1.0 + tol;
}

// Distance from z to the ellipse curve: dense theta sampling followed by
// golden-section refinement of the bracketing arc.
[[nodiscard]] inline double ellipse_distance(Complex z, const HoppingEllipse& e, int samples = 4096) {
  if (samples < 8) throw ConfigError("ellipse_distance: need at least 8 samples");
  const double two_pi = 2.0 * M_PI;
  auto dist = [&](double theta) { return std::abs(z - e.point(theta)); };

  double best_theta = 0.0;
  double best = dist(0.0);
  for (int k = 1; k < samples; ++k) {
    const double theta = two_pi * static_cast<double>(k) / static_cast<double>(samples);
    const double d = dist(theta);
    if (d < best) {
      best = d;
      best_theta = theta;
    }
  }

  const double step = two_pi / static_cast<double>(samples);
  double lo = best_theta - step;
  double hi = best_theta + step;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - golden * (hi - lo);
  double b = lo + golden * (hi - lo);
  double fa = dist(a);
  double fb = dist(b);
  while (hi - lo > 1e-12) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - golden * (hi - lo);
      fa = dist(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + golden * (hi - lo);
      fb = dist(b);
    }
  }
  return std::min({best, fa, fb});
}

// True iff dist(z, curve) <= m + 1e-9.
[[nodiscard]] inline bool inclusion_bound_tube(Complex z, double g, double m, double tol = 1e-9) {
  if (!(g > 0)) throw ConfigError("inclusion_bound_tube: g must be > 0");
  if (m < 0) throw ConfigError("inclusion_bound_tube: m must be >= 0");
  return ellipse_distance(z, HoppingEllipse::from_g(g)) <= m + tol;
}

// r = e^g - e^{-g} - B when positive: the disc |z| < r is spectrum-free.
[[nodiscard]] inline std::optional<double> hole_radius(double g, double B) {
  if (!(g > 0)) throw ConfigError("hole_radius: g must be > 0");
  if (B < 0) throw ConfigError("hole_radius: B must be >= 0");
  const double r = std::exp(g) - std::exp(-g) - B;
  if (r > 0) return r;
  return std::nullopt;
}

}  // namespace speclab::geometry
