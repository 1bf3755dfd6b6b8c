#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "speclab/linalg.hpp"
#include "speclab/models.hpp"
#include "speclab/rng.hpp"

using namespace speclab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix random_complex(Index n, std::uint64_t seed) {
  Matrix a(n, n);
  std::uint64_t e = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = Complex(rng::uniform(seed, 0, e++, -1.0, 1.0),
                        rng::uniform(seed, 0, e++, -1.0, 1.0));
  return a;
}

Matrix random_real(Index n, std::uint64_t seed) {
  Matrix a(n, n);
  std::uint64_t e = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = rng::uniform(seed, 0, e++, -1.0, 1.0);
  return a;
}

}  // namespace

TEST_CASE("operator norm on diagonal and nilpotent matrices", "[linalg]") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -3.0;
  CHECK_THAT(linalg::operator_norm(d), WithinRel(3.0, 1e-12));

  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 2.0;
  CHECK_THAT(linalg::operator_norm(nil), WithinRel(2.0, 1e-12));
}

TEST_CASE("operator norm satisfies the Gram identity", "[linalg]") {
  const Matrix a = random_complex(4, 11);
  const double n1 = linalg::operator_norm(a);
  const double n2 = linalg::operator_norm(a.adjoint() * a);
  CHECK_THAT(n1 * n1, WithinRel(n2, 1e-8));
}

TEST_CASE("sigma_min on diagonal and singular matrices", "[linalg]") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  CHECK_THAT(linalg::sigma_min(d), WithinRel(1.0, 1e-12));

  Matrix s = Matrix::Ones(2, 2);
  CHECK(linalg::sigma_min(s) <= 1e-12);
}

TEST_CASE("resolvent of a normal matrix is the reciprocal spectral distance", "[linalg]") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = Complex(0.0, 1.0);
  d(1, 1) = 2.0;
  d(2, 2) = -1.0;
  const Complex z(0.5, 0.5);
  Matrix shifted = d;
  shifted.diagonal().array() -= z;
  double dist = 1e300;
  for (Index k = 0; k < 3; ++k) dist = std::min(dist, std::abs(z - d(k, k)));
  CHECK_THAT(1.0 / linalg::sigma_min(shifted), WithinRel(1.0 / dist, 1e-8));
}

TEST_CASE("invert matches hand values and the multiply-back oracle", "[linalg]") {
  CHECK(linalg::invert(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2), 1e-14));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const Matrix dinv = linalg::invert(d);
  CHECK_THAT(std::abs(dinv(0, 0)), WithinRel(0.5, 1e-14));
  CHECK_THAT(std::abs(dinv(1, 1)), WithinRel(0.25, 1e-14));

  const Matrix a = random_complex(5, 3) + 5.0 * Matrix::Identity(5, 5);
  CHECK(linalg::operator_norm(a * linalg::invert(a) - Matrix::Identity(5, 5)) < 1e-10);
}

TEST_CASE("invert rejects singular input", "[linalg]") {
  CHECK_THROWS_AS(linalg::invert(Matrix::Zero(3, 3)), SingularError);
}

TEST_CASE("non-finite entries are rejected", "[linalg]") {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(linalg::operator_norm(a), NonFiniteError);
  CHECK_THROWS_AS(linalg::eigendecompose(a), NonFiniteError);
}

TEST_CASE("identity is flagged degenerate with zero residual", "[linalg]") {
  const auto es = linalg::eigendecompose(Matrix::Identity(3, 3));
  CHECK(es.degenerate);
  CHECK(es.residual <= 1e-14);
  for (Index k = 0; k < 3; ++k)
    CHECK_THAT(std::abs(es.eigenvalues(k)), WithinRel(1.0, 1e-14));
}

TEST_CASE("swap matrix has eigenvalues -1 and 1 with orthonormal vectors", "[linalg]") {
  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  const auto es = linalg::eigendecompose(swap);
  CHECK_THAT(es.eigenvalues(0).real(), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(es.eigenvalues(1).real(), WithinAbs(1.0, 1e-14));
  CHECK(std::abs(es.V.col(0).dot(es.V.col(1))) < 1e-12);
}

TEST_CASE("eigenvector columns are unit norm and Vinv inverts V", "[linalg]") {
  const Matrix a = random_complex(6, 17);
  const auto es = linalg::eigendecompose(a);
  for (Index k = 0; k < 6; ++k) CHECK_THAT(es.V.col(k).norm(), WithinRel(1.0, 1e-12));
  CHECK(linalg::operator_norm(es.V * es.Vinv - Matrix::Identity(6, 6)) < 1e-10);
  CHECK(es.residual < 1e-10);
}

TEST_CASE("toeplitz-wrap family eigenvectors are geometric waves", "[linalg]") {
  // Columns of V should be proportional to a^n e^{2 pi i r n / N}.
  const Index n = 4;
  const double a = 2.0;
  const Matrix mat = models::wrap_matrix(n, a, models::wrap_f_distinct(n));
  const auto es = linalg::eigendecompose(mat);
  for (Index col = 0; col < n; ++col) {
    // Identify r by the ratio of consecutive entries: ratio = a * omega^r.
    const Complex ratio = es.V(1, col) / es.V(0, col);
    bool matched = false;
    for (Index r = 0; r < n; ++r) {
      const Complex expected =
          a * std::exp(Complex(0.0, 2.0 * M_PI * static_cast<double>(r) /
                                        static_cast<double>(n)));
      if (std::abs(ratio - expected) < 1e-8) matched = true;
    }
    CHECK(matched);
    // And the full column follows the same geometric law.
    for (Index row = 2; row < n; ++row)
      CHECK(std::abs(es.V(row, col) / es.V(row - 1, col) - ratio) < 1e-8);
  }
}

TEST_CASE("eigenvalues ordered lexicographically by (Re, Im)", "[linalg]") {
  const Matrix a = random_complex(8, 23);
  const auto es = linalg::eigendecompose(a);
  for (Index k = 1; k < 8; ++k) {
    const Complex prev = es.eigenvalues(k - 1);
    const Complex cur = es.eigenvalues(k);
    const bool ordered =
        prev.real() < cur.real() || (prev.real() == cur.real() && prev.imag() <= cur.imag());
    CHECK(ordered);
  }
}

TEST_CASE("eigenvalues_sorted agrees with the full decomposition", "[linalg]") {
  const Matrix a = random_real(7, 29);
  const auto es = linalg::eigendecompose(a);
  const Vector values = linalg::eigenvalues_sorted(a);
  for (Index k = 0; k < 7; ++k)
    CHECK(std::abs(values(k) - es.eigenvalues(k)) < 1e-10);
}

TEST_CASE("eigenvalue multiset invariant under similarity", "[linalg]") {
  const Matrix a = random_complex(5, 41);
  const Matrix s = random_complex(5, 43) + 4.0 * Matrix::Identity(5, 5);
  const Matrix conj = s * a * linalg::invert(s);
  const Vector va = linalg::eigenvalues_sorted(a);
  const Vector vb = linalg::eigenvalues_sorted(conj);
  for (Index k = 0; k < 5; ++k) CHECK(std::abs(va(k) - vb(k)) < 1e-8);
}

TEST_CASE("condition-type inequalities for invertible inputs", "[linalg]") {
  const Matrix a = random_complex(6, 53) + 3.0 * Matrix::Identity(6, 6);
  const Matrix ainv = linalg::invert(a);
  CHECK(linalg::operator_norm(a) * linalg::operator_norm(ainv) >= 1.0);
  CHECK_THAT(linalg::sigma_min(a) * linalg::operator_norm(ainv), WithinRel(1.0, 1e-8));
}

TEST_CASE("real input takes a real solve and still reports complex pairs", "[linalg]") {
  Matrix rot = Matrix::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const auto es = linalg::eigendecompose(rot);
  CHECK_THAT(es.eigenvalues(0).imag(), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(es.eigenvalues(1).imag(), WithinAbs(1.0, 1e-12));
}
