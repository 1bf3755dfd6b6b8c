#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "speclab/rng.hpp"
#include "speclab/types.hpp"

namespace speclab::models {

// ---------------------------------------------------------------------------
// Random tridiagonal ensemble
// ---------------------------------------------------------------------------

struct EnsembleSpec {
  Index N = 10;
  std::int64_t M = 1;
  std::uint64_t seed = 0;
  double sub_hi = 1.0;    // subdiagonal ~ U[0, sub_hi]
  double diag_hi = 2.0;   // diagonal    ~ U[0, diag_hi]
  double super_hi = 3.0;  // superdiagonal ~ U[0, super_hi]

  void validate() const {
    if (N < 2) throw ConfigError("EnsembleSpec: N must be >= 2, got " + std::to_string(N));
    if (M < 1) throw ConfigError("EnsembleSpec: M must be >= 1, got " + std::to_string(M));
    if (!(sub_hi > 0) || !(diag_hi > 0) || !(super_hi > 0))
      throw ConfigError("EnsembleSpec: distribution bounds must be positive");
  }
};

// Entry ids within a sample: subdiagonal 0..N-2, diagonal N-1..2N-2,
// superdiagonal 2N-1..3N-3.  Pure in (seed, sample_index, entry id).
[[nodiscard]] inline Matrix sample_tridiagonal(const EnsembleSpec& spec,
                                               std::int64_t sample_index) {
  spec.validate();
  if (sample_index < 0 || sample_index >= spec.M)
    throw ConfigError("sample_tridiagonal: sample_index out of range");
  const Index n = spec.N;
  const auto seed = spec.seed;
  const auto sample = static_cast<std::uint64_t>(sample_index);
  Matrix a = Matrix::Zero(n, n);
  std::uint64_t entry = 0;
  for (Index k = 0; k + 1 < n; ++k)
    a(k + 1, k) = rng::uniform(seed, sample, entry++, 0.0, spec.sub_hi);
  for (Index k = 0; k < n; ++k)
    a(k, k) = rng::uniform(seed, sample, entry++, 0.0, spec.diag_hi);
  for (Index k = 0; k + 1 < n; ++k)
    a(k, k + 1) = rng::uniform(seed, sample, entry++, 0.0, spec.super_hi);
  return a;
}

// ---------------------------------------------------------------------------
// Triangular-Toeplitz-with-wrap family: A_{m,n} = f(m-n) a^{m-n}
// ---------------------------------------------------------------------------

// Residue table with f supported on {-1, 0, 1}, all ones.  For N >= 3 the
// associated eigenvalues 1 + 2cos(2 pi r / N) are exactly degenerate in pairs;
// kept for the N=2 cases and for demonstrating the degeneracy flag.
[[nodiscard]] inline Vector wrap_f_ones(Index n) {
  if (n < 2) throw ConfigError("wrap_f_ones: N must be >= 2");
  Vector f = Vector::Zero(n);
  f(0) = 1.0;
  f(1) = 1.0;
  f(n - 1) = 1.0;
  return f;
}

// Residue table (f(-1), f(0), f(1)) = (1, 1, 2): eigenvalues
// 1 + 3cos(2 pi r / N) - i sin(2 pi r / N), pairwise distinct for every N >= 3.
[[nodiscard]] inline Vector wrap_f_distinct(Index n) {
  if (n < 3) throw ConfigError("wrap_f_distinct: N must be >= 3");
  Vector f = Vector::Zero(n);
  f(0) = 1.0;
  f(1) = 2.0;
  f(n - 1) = 1.0;
  return f;
}

// f is a period-N residue table: entry k of the matrix uses f((m-n) mod N).
[[nodiscard]] inline Matrix wrap_matrix(Index n, double a, const Vector& f) {
  if (n < 2) throw ConfigError("wrap_matrix: N must be >= 2");
  if (!(a > 1.0)) throw ConfigError("wrap_matrix: a must be > 1");
  if (f.size() != n) throw ShapeError("wrap_matrix: residue table must have length N");
  Matrix m(n, n);
  for (Index row = 0; row < n; ++row) {
    for (Index col = 0; col < n; ++col) {
      const Index d = row - col;
      const Index residue = ((d % n) + n) % n;
      m(row, col) = f(residue) * std::pow(a, static_cast<double>(d));
    }
  }
  return m;
}

// Shared norm of all N spectral projections of the family above:
// c = a (a^N - a^{-N}) / ((a^2 - 1) N).
[[nodiscard]] inline double wrap_index(Index n, double a) {
  if (n < 2) throw ConfigError("wrap_index: N must be >= 2");
  if (!(a > 1.0)) throw ConfigError("wrap_index: a must be > 1");
  const double nd = static_cast<double>(n);
  return a * (std::pow(a, nd) - std::pow(a, -nd)) / ((a * a - 1.0) * nd);
}

// ---------------------------------------------------------------------------
// Bidiagonal family: s x s, subdiagonal x, superdiagonal y
// ---------------------------------------------------------------------------

[[nodiscard]] inline Matrix build_bidiagonal(Index s, double x, double y) {
  if (s < 1) throw ConfigError("build_bidiagonal: s must be >= 1");
  if (!(x > 0) || !(y > 0)) throw ConfigError("build_bidiagonal: x and y must be positive");
  Matrix b = Matrix::Zero(s, s);
  for (Index k = 0; k + 1 < s; ++k) {
    b(k + 1, k) = x;
    b(k, k + 1) = y;
  }
  return b;
}

// Closed-form projection norm for the k-th eigenvalue, evaluated from
// the three explicit sums over sin^2(pi k r / (s+1)) with weights (x/y)^r and
// (y/x)^r.  Equals 1 identically when x == y.
[[nodiscard]] inline double bidiagonal_norm_closed(Index s, double x, double y, Index k) {
  if (s < 1) throw ConfigError("bidiagonal_norm_closed: s must be >= 1");
  if (!(x > 0) || !(y > 0)) throw ConfigError("bidiagonal_norm_closed: x, y must be positive");
  if (k < 1 || k > s) throw ConfigError("bidiagonal_norm_closed: k must be in [1, s]");
  const double theta = M_PI * static_cast<double>(k) / static_cast<double>(s + 1);
  double overlap = 0.0;
  double phi_sq = 0.0;
  double psi_sq = 0.0;
  for (Index r = 1; r <= s; ++r) {
    const double sin_sq = std::pow(std::sin(theta * static_cast<double>(r)), 2);
    overlap += sin_sq;
    phi_sq += sin_sq * std::pow(x / y, static_cast<double>(r));
    psi_sq += sin_sq * std::pow(y / x, static_cast<double>(r));
  }
  return std::sqrt(phi_sq * psi_sq) / overlap;
}

// ---------------------------------------------------------------------------
// Non-self-adjoint Anderson truncations
// ---------------------------------------------------------------------------

enum class Boundary { Dirichlet, Periodic };

struct PotentialLaw {
  enum class Kind { Uniform, TwoPoint };
  Kind kind = Kind::Uniform;
  double B = 1.0;         // uniform on [-B, B]
  double alpha = 0.0;     // two-point values
  double beta = 0.0;
  double p_alpha = 0.5;   // probability of alpha

  void validate() const {
    if (kind == Kind::Uniform) {
      if (B < 0) throw ConfigError("PotentialLaw: B must be >= 0");
    } else if (p_alpha < 0 || p_alpha > 1) {
      throw ConfigError("PotentialLaw: p_alpha must lie in [0, 1]");
    }
  }

  [[nodiscard]] double max_abs() const {
    if (kind == Kind::Uniform) return B;
    return std::max(std::abs(alpha), std::abs(beta));
  }

  [[nodiscard]] double draw(std::uint64_t seed, std::uint64_t site_id) const {
    const double u = rng::uniform01(seed, 0, site_id);
    if (kind == Kind::Uniform) return -B + 2.0 * B * u;
    return u < p_alpha ? alpha : beta;
  }
};

struct AndersonParams {
  double g = 1.0;        // hopping asymmetry: subdiagonal e^{-g}, superdiagonal e^{g}
  double h = 0.0;        // second-axis asymmetry, 2D only
  Index half_width = 1;  // sites -N..N
  PotentialLaw potential{};
  Boundary bc = Boundary::Dirichlet;
  std::uint64_t seed = 0;

  void validate(bool two_d = false) const {
    if (!(g > 0)) throw ConfigError("AndersonParams: g must be > 0");
    if (two_d && !(h > 0)) throw ConfigError("AndersonParams: h must be > 0 for the 2D model");
    if (half_width < 1)
      throw ConfigError("AndersonParams: half_width must be >= 1 (at least 3 sites)");
    potential.validate();
  }

  [[nodiscard]] Index sites() const { return 2 * half_width + 1; }
};

// Hf_n = e^{-g} f_{n-1} + e^{g} f_{n+1} + V_n f_n on sites -N..N.  Periodic
// wrap adds H(first,last) = e^{-g} and H(last,first) = e^{g}.  Site n maps to
// potential entry id n + N.
[[nodiscard]] inline Matrix anderson_1d(const AndersonParams& params) {
  params.validate(false);
  const Index n = params.sites();
  const double lower = std::exp(-params.g);
  const double upper = std::exp(params.g);
  Matrix hmat = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    hmat(i, i) = params.potential.draw(params.seed, static_cast<std::uint64_t>(i));
  for (Index i = 0; i + 1 < n; ++i) {
    hmat(i + 1, i) = lower;
    hmat(i, i + 1) = upper;
  }
  if (params.bc == Boundary::Periodic) {
    hmat(0, n - 1) = lower;
    hmat(n - 1, 0) = upper;
  }
  return hmat;
}

// Similarity comparator for the Dirichlet truncation: same diagonal draws,
// both off-diagonals 1.  Real symmetric, so its spectrum is real by
// construction and equals the Dirichlet spectrum in exact arithmetic.
[[nodiscard]] inline Matrix anderson_1d_symmetrized(const AndersonParams& params) {
  params.validate(false);
  const Index n = params.sites();
  Matrix hmat = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    hmat(i, i) = params.potential.draw(params.seed, static_cast<std::uint64_t>(i));
  for (Index i = 0; i + 1 < n; ++i) {
    hmat(i + 1, i) = 1.0;
    hmat(i, i + 1) = 1.0;
  }
  return hmat;
}

// 2D truncation on the square grid of sites (m, n), both in -N..N, Dirichlet
// only: H = A_g kron I + I kron A_h + diag(V) with row-major site order
// (m outer, n inner); site (m, n) maps to potential id (m+N)(2N+1) + (n+N).
[[nodiscard]] inline Matrix anderson_2d(const AndersonParams& params) {
  params.validate(true);
  if (params.bc != Boundary::Dirichlet)
    throw ConfigError("anderson_2d: only Dirichlet truncations are defined");
  const Index n1 = params.sites();
  const Index dim = n1 * n1;
  const double gl = std::exp(-params.g);
  const double gu = std::exp(params.g);
  const double hl = std::exp(-params.h);
  const double hu = std::exp(params.h);
  Matrix hmat = Matrix::Zero(dim, dim);
  for (Index m = 0; m < n1; ++m) {
    for (Index n = 0; n < n1; ++n) {
      const Index row = m * n1 + n;
      hmat(row, row) = params.potential.draw(params.seed, static_cast<std::uint64_t>(row));
      if (m + 1 < n1) {
        hmat(row + n1, row) = gl;  // (m+1, n) <- (m, n)
        hmat(row, row + n1) = gu;
      }
      if (n + 1 < n1) {
        hmat(row + 1, row) = hl;  // (m, n+1) <- (m, n)
        hmat(row, row + 1) = hu;
      }
    }
  }
  return hmat;
}

// Step-potential comparison operator on sites -N..N, Dirichlet ends: diagonal
// alpha for n >= step_at, beta below, off-diagonals e^{-g} / e^{g}.
[[nodiscard]] inline Matrix step_operator(double g, double alpha, double beta, Index half_width,
                                       Index step_at = 1) {
  if (!(g > 0)) throw ConfigError("step_operator: g must be > 0");
  if (half_width < 1) throw ConfigError("step_operator: half_width must be >= 1");
  const Index n = 2 * half_width + 1;
  const double lower = std::exp(-g);
  const double upper = std::exp(g);
  Matrix k = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index site = i - half_width;
    k(i, i) = site >= step_at ? alpha : beta;
  }
  for (Index i = 0; i + 1 < n; ++i) {
    k(i + 1, i) = lower;
    k(i, i + 1) = upper;
  }
  return k;
}

}  // namespace speclab::models
