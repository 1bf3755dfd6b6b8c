#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "speclab/instability.hpp"
#include "speclab/models.hpp"
#include "speclab/rng.hpp"

using namespace speclab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix jordan_ish() {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  a(1, 1) = 1.1;
  return a;
}

Matrix random_hermitian(Index n, std::uint64_t seed) {
  Matrix a(n, n);
  std::uint64_t e = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = Complex(rng::uniform(seed, 0, e++, -1.0, 1.0),
                        rng::uniform(seed, 0, e++, -1.0, 1.0));
  return Matrix(0.5 * (a + a.adjoint()));
}

}  // namespace

TEST_CASE("symmetric input gives unit projection norms", "[instability]") {
  const auto es = linalg::eigendecompose(random_hermitian(5, 7));
  const auto pn = instability::projection_norms_direct(es);
  for (Index k = 0; k < 5; ++k) CHECK_THAT(pn.norms(k), WithinRel(1.0, 1e-8));
}

TEST_CASE("upper-triangular 2x2 evaluates to the hand value", "[instability]") {
  // phi = (1, 0), psi proportional to (-0.1, 1): both projections have norm
  // sqrt(1.01) / 0.1.
  const double expected = std::sqrt(1.01) / 0.1;
  const auto es = linalg::eigendecompose(jordan_ish());
  const auto direct = instability::projection_norms_direct(es);
  const auto gram = instability::projection_norms_gram(es);
  for (Index k = 0; k < 2; ++k) {
    CHECK_THAT(direct.norms(k), WithinRel(expected, 1e-6));
    CHECK_THAT(gram.norms(k), WithinRel(expected, 1e-6));
  }
}

TEST_CASE("identity system has unit gram norms", "[instability]") {
  linalg::EigenSystem es;
  es.eigenvalues = Vector::Zero(2);
  es.eigenvalues << Complex(0.0), Complex(1.0);
  es.V = Matrix::Identity(2, 2);
  es.Vinv = Matrix::Identity(2, 2);
  const auto pn = instability::projection_norms_gram(es);
  CHECK(pn.norms(0) == 1.0);
  CHECK(pn.norms(1) == 1.0);
}

TEST_CASE("direct and gram routes agree on random 8x8 input", "[instability]") {
  Matrix a(8, 8);
  std::uint64_t e = 0;
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) a(i, j) = rng::uniform(13, 0, e++, -1.0, 1.0);
  const auto es = linalg::eigendecompose(a);
  const auto direct = instability::projection_norms_direct(es);
  const auto gram = instability::projection_norms_gram(es);
  for (Index k = 0; k < 8; ++k)
    CHECK_THAT(direct.norms(k), WithinRel(gram.norms(k), 1e-8));
}

TEST_CASE("projection norms are at least 1 and sorted copy is a permutation",
          "[instability]") {
  Matrix a(6, 6);
  std::uint64_t e = 0;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) a(i, j) = rng::uniform(19, 0, e++, 0.0, 1.0);
  const auto pn = instability::projection_norms_gram(linalg::eigendecompose(a));
  double raw_sum = 0.0;
  double sorted_sum = 0.0;
  for (Index k = 0; k < 6; ++k) {
    CHECK(pn.norms(k) >= 1.0 - 1e-8);
    raw_sum += pn.norms(k);
    sorted_sum += pn.sorted_norms(k);
    if (k > 0) CHECK(pn.sorted_norms(k) >= pn.sorted_norms(k - 1));
  }
  CHECK_THAT(raw_sum, WithinRel(sorted_sum, 1e-12));
}

TEST_CASE("degenerate systems are rejected", "[instability]") {
  const auto es = linalg::eigendecompose(Matrix::Identity(3, 3));
  CHECK(es.degenerate);
  CHECK_THROWS_AS(instability::projection_norms_direct(es), DegenerateInputError);
  CHECK_THROWS_AS(instability::projection_norms_gram(es), DegenerateInputError);
  CHECK_THROWS_AS(instability::instability_index(Matrix::Identity(3, 3)),
                  DegenerateInputError);
}

TEST_CASE("instability index of normal matrices is 1", "[instability]") {
  CHECK_THAT(instability::instability_index(random_hermitian(6, 29)), WithinRel(1.0, 1e-8));

  Matrix rot = Matrix::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  CHECK_THAT(instability::instability_index(rot), WithinRel(1.0, 1e-8));
}

TEST_CASE("instability index reproduces closed-form families", "[instability]") {
  CHECK_THAT(instability::instability_index(models::build_bidiagonal(2, 1.0, 2.0)),
             WithinRel(1.0606601717798212, 1e-8));
  const Matrix t3 = models::wrap_matrix(4, 2.0, models::wrap_f_distinct(4));
  CHECK_THAT(instability::instability_index(t3), WithinRel(2.65625, 1e-8));
}

TEST_CASE("half-list index picks the middle of the ascending list", "[instability]") {
  // Normal 4x4: every norm is 1, so the middle entry is too.
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1.0, 2.0, 3.0, 4.0;
  CHECK_THAT(instability::half_list_index(d), WithinRel(1.0, 1e-8));
  const double expected = std::sqrt(1.01) / 0.1;
  CHECK_THAT(instability::half_list_index(jordan_ish()), WithinRel(expected, 1e-6));
}

TEST_CASE("2x2 non-normal matrices have equal projection norms", "[instability]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix a(2, 2);
    std::uint64_t e = 0;
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) a(i, j) = rng::uniform(100 + seed, 0, e++, -1.0, 1.0);
    const auto es = linalg::eigendecompose(a);
    if (es.degenerate) continue;
    const auto pn = instability::projection_norms_direct(es);
    CHECK_THAT(pn.norms(0), WithinRel(pn.norms(1), 1e-8));
  }
}

TEST_CASE("condition number hand values and decoupling example", "[instability]") {
  CHECK_THAT(instability::condition_number(Matrix::Identity(4, 4)), WithinRel(1.0, 1e-10));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 10.0;
  CHECK_THAT(instability::condition_number(d), WithinRel(10.0, 1e-10));

  // Small condition number, large instability index.
  const double kappa = instability::condition_number(jordan_ish());
  CHECK(kappa < 5.0);
  CHECK(instability::instability_index(jordan_ish()) > 10.0);
}

TEST_CASE("resolvent diagnostics hold for the upper-triangular example", "[instability]") {
  const auto report =
      instability::proposition1_diagnostics(jordan_ish(), {Complex(2.0, 0.0)});
  CHECK(report.index_below_k1);
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].holds);
  CHECK(report.all_hold());
}

TEST_CASE("resolvent diagnostics are exact for normal input", "[instability]") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << Complex(0.0), Complex(1.0), Complex(0.0, 2.0);
  const auto report = instability::proposition1_diagnostics(
      d, {Complex(4.0, 0.0), Complex(0.5, 0.5)});
  CHECK_THAT(report.k1, WithinRel(1.0, 1e-10));
  for (const auto& check : report.checks) {
    double dist = 1e300;
    for (Index k = 0; k < 3; ++k) dist = std::min(dist, std::abs(check.z - d(k, k)));
    CHECK_THAT(check.lhs, WithinRel(1.0 / dist, 1e-8));
    CHECK(check.holds);
  }
}

TEST_CASE("resolvent diagnostics on random 10x10 at 100 sample points", "[instability]") {
  Matrix a(10, 10);
  std::uint64_t e = 0;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) a(i, j) = rng::uniform(77, 0, e++, -1.0, 1.0);
  std::vector<Complex> zs;
  for (std::uint64_t k = 0; k < 100; ++k)
    zs.emplace_back(rng::uniform(78, k, 0, -6.0, 6.0), rng::uniform(78, k, 1, -6.0, 6.0));
  const auto report = instability::proposition1_diagnostics(a, zs);
  CHECK(report.all_hold());
}

TEST_CASE("sample points on the spectrum are rejected", "[instability]") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << Complex(0.0), Complex(1.0);
  CHECK_THROWS_AS(instability::proposition1_diagnostics(d, {Complex(1.0, 0.0)}),
                  DegenerateInputError);
}
