#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "speclab/linalg.hpp"
#include "speclab/types.hpp"

namespace speclab::instability {

// Norms of the rank-1 spectral projections, paired index-wise with the
// eigenvalue order of the source system plus an ascending copy.
struct ProjectionNormVector {
  RealVector norms;
  RealVector sorted_norms;
};

namespace detail {

inline void require_nondegenerate(const linalg::EigenSystem& es, const char* where) {
  if (es.degenerate)
    throw DegenerateInputError(std::string(where) +
                               ": eigenvalue gap below degeneracy threshold");
}

[[nodiscard]] inline ProjectionNormVector with_sorted(RealVector norms) {
  ProjectionNormVector out;
  out.sorted_norms = norms;
  std::sort(out.sorted_norms.begin(), out.sorted_norms.end());
  out.norms = std::move(norms);
  return out;
}

}  // namespace detail

// ‖P_n‖ = ‖φ_n‖ ‖ψ_n‖ / |ψ_n* φ_n| with φ_n the n-th right eigenvector and
// ψ_n* the n-th row of V⁻¹.
[[nodiscard]] inline ProjectionNormVector projection_norms_direct(const linalg::EigenSystem& es) {
  detail::require_nondegenerate(es, "projection_norms_direct");
  const Index n = es.size();
  RealVector norms(n);
  for (Index k = 0; k < n; ++k) {
    const Vector phi = es.V.col(k);
    const Vector psi = es.Vinv.row(k).adjoint();
    const Complex overlap = psi.dot(phi);
    norms(k) = phi.norm() * psi.norm() / std::abs(overlap);
  }
  return detail::with_sorted(std::move(norms));
}

// ‖P_n‖ = E_nn^{1/2} with E = V⁻¹ (V⁻¹)*.
[[nodiscard]] inline ProjectionNormVector projection_norms_gram(const linalg::EigenSystem& es) {
  detail::require_nondegenerate(es, "projection_norms_gram");
  const Index n = es.size();
  RealVector norms(n);
  for (Index k = 0; k < n; ++k) norms(k) = std::sqrt(es.Vinv.row(k).squaredNorm());
  return detail::with_sorted(std::move(norms));
}

// max_n ‖P_n‖; equals 1 for normal matrices.
[[nodiscard]] inline double instability_index(const Matrix& a, const linalg::Options& opt = {}) {
  const auto es = linalg::eigendecompose(a, opt);
  if (es.degenerate) throw DegenerateInputError("instability_index: degenerate eigenvalues");
  const auto pn = projection_norms_gram(es);
  return pn.sorted_norms(pn.sorted_norms.size() - 1);
}

// Entry at 1-based position ceil(N/2) of the ascending projection-norm list.
[[nodiscard]] inline double half_list_index(const Matrix& a, const linalg::Options& opt = {}) {
  const auto es = linalg::eigendecompose(a, opt);
  if (es.degenerate) throw DegenerateInputError("half_list_index: degenerate eigenvalues");
  const auto pn = projection_norms_gram(es);
  return pn.sorted_norms((pn.sorted_norms.size() + 1) / 2 - 1);
}

// κ(A) = ‖A‖ ‖A⁻¹‖.
[[nodiscard]] inline double condition_number(const Matrix& a, const linalg::Options& opt = {}) {
  return linalg::operator_norm(a) * linalg::operator_norm(linalg::invert(a, opt));
}

struct ResolventCheck {
  Complex z;
  double lhs = 0.0;     // 1 / σ_min(A - z I) = ‖(A - z I)⁻¹‖
  double rhs = 0.0;     // N · i(A) / dist(z, Spec A)
  bool holds = false;   // lhs ≤ rhs · (1 + 1e-6)
};

struct Prop1Report {
  double k1 = 0.0;     // κ(V), unit-column diagonalizer
  double index = 0.0;  // i(A)
  bool index_below_k1 = false;
  std::vector<ResolventCheck> checks;

  [[nodiscard]] bool all_hold() const {
    if (!index_below_k1) return false;
    return std::all_of(checks.begin(), checks.end(),
                       [](const ResolventCheck& c) { return c.holds; });
  }
};

// Numerical shadow of the diagonalizer/resolvent inequality chain: witnesses
// i(A) ≤ κ(V) and the N·i(A)/dist resolvent bound at each sampled point.
[[nodiscard]] inline Prop1Report proposition1_diagnostics(const Matrix& a,
                                                          const std::vector<Complex>& z_samples,
                                                          const linalg::Options& opt = {}) {
  const auto es = linalg::eigendecompose(a, opt);
  if (es.degenerate)
    throw DegenerateInputError("proposition1_diagnostics: degenerate eigenvalues");
  const Index n = es.size();
  const auto pn = projection_norms_gram(es);

  Prop1Report report;
  report.index = pn.sorted_norms(n - 1);
  report.k1 = linalg::operator_norm(es.V) * linalg::operator_norm(es.Vinv);
  report.index_below_k1 = report.index <= report.k1 * (1.0 + 1e-6);

  report.checks.reserve(z_samples.size());
  for (const Complex z : z_samples) {
    ResolventCheck check;
    check.z = z;
    double dist = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) dist = std::min(dist, std::abs(z - es.eigenvalues(k)));
    if (dist == 0.0)
      throw DegenerateInputError("proposition1_diagnostics: sample point lies in the spectrum");
    Matrix shifted = a;
    shifted.diagonal().array() -= z;
    check.lhs = 1.0 / linalg::sigma_min(shifted);
    check.rhs = static_cast<double>(n) * report.index / dist;
    check.holds = check.lhs <= check.rhs * (1.0 + 1e-6);
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace speclab::instability
