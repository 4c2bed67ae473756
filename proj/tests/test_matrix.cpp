#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gdht/linalg.hpp"
#include "gdht/matrix.hpp"
#include "support.hpp"

using gdht::DenseMatrix;
using gdht::ErrorKind;

namespace {

// Eigenvalues of a symmetric 3x3 from the characteristic polynomial
// (trigonometric solution of the depressed cubic).
std::vector<double> cubic_eigenvalues(const DenseMatrix& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  DenseMatrix b = a;
  for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
  b *= 1.0 / p;
  const double det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                       b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                       b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e3, e2, e1};
}

}  // namespace

TEST_CASE("DenseMatrix construction enforces shape and finiteness") {
  CHECK_ERROR_KIND(DenseMatrix(0, 3), ErrorKind::DimensionMismatch);
  CHECK_ERROR_KIND(DenseMatrix(2, 0), ErrorKind::DimensionMismatch);
  CHECK_ERROR_KIND(DenseMatrix(1, 2, std::vector<double>{1.0}), ErrorKind::DimensionMismatch);
  CHECK_ERROR_KIND(DenseMatrix(1, 1, std::numeric_limits<double>::quiet_NaN()),
                   ErrorKind::NonFiniteEntry);
  CHECK_ERROR_KIND((DenseMatrix{{1.0, 2.0}, {3.0}}), ErrorKind::RaggedRows);

  const DenseMatrix a{{1, 2}, {3, 4}};
  CHECK(a.rows() == 2);
  CHECK(a(1, 0) == 3.0);
  CHECK(gdht::transpose(a) == DenseMatrix{{1, 3}, {2, 4}});
  CHECK(gdht::multiply(a, a) == DenseMatrix{{7, 10}, {15, 22}});
  CHECK(gdht::transpose_multiply(a, a) == DenseMatrix{{10, 14}, {14, 20}});
  CHECK(gdht::gram(a) == gdht::transpose_multiply(a, a));
  CHECK(gdht::trace(a) == 5.0);
  CHECK(gdht::count_nonzero(DenseMatrix{{0, 1}, {0, 2}}) == 2);
}

TEST_CASE("cholesky examples") {
  CHECK(gdht::cholesky(DenseMatrix::identity(3)).lower == DenseMatrix::identity(3));

  const DenseMatrix m{{4, 2}, {2, 3}};
  const DenseMatrix l = gdht::cholesky(m).lower;
  CHECK(l(0, 1) == 0.0);
  CHECK(testing::max_abs_diff(gdht::multiply(l, gdht::transpose(l)), m) <= 1e-12);

  CHECK_ERROR_KIND(gdht::cholesky(DenseMatrix{{1, 2}, {2, 1}}), ErrorKind::NotPositiveDefinite);
  CHECK_ERROR_KIND(gdht::cholesky(DenseMatrix{{1, 2}, {0, 1}}), ErrorKind::NotSymmetric);
  CHECK_ERROR_KIND(gdht::cholesky(DenseMatrix(2, 3, 1.0)), ErrorKind::NotSquare);
  // A pivot at 1e-12 * max diagonal is a failure, not round-off.
  CHECK_ERROR_KIND(gdht::cholesky(DenseMatrix{{1, 1}, {1, 1}}), ErrorKind::NotPositiveDefinite);
}

TEST_CASE("log_det_spd examples") {
  CHECK(gdht::log_det_spd(DenseMatrix::identity(4)) == 0.0);
  CHECK(gdht::log_det_spd(DenseMatrix{{2, 0}, {0, 3}}) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(gdht::log_det_spd(DenseMatrix{{1, 0.4}, {0.4, 1}}) ==
        doctest::Approx(std::log(0.84)).epsilon(1e-13));
  CHECK(gdht::log_det_spd(DenseMatrix{{1, 0.4}, {0.4, 1}}) == doctest::Approx(-0.174353).epsilon(1e-6));
}

TEST_CASE("spd_inverse examples") {
  // The Cholesky route leaves one-ulp residue on √2·√2.
  CHECK(testing::max_abs_diff(gdht::spd_inverse(DenseMatrix{{2, 0}, {0, 4}}),
                              DenseMatrix{{0.5, 0}, {0, 0.25}}) <= 1e-15);
  CHECK(gdht::spd_inverse(DenseMatrix::identity(3)) == DenseMatrix::identity(3));
  const DenseMatrix inv = gdht::spd_inverse(DenseMatrix{{1, 0.4}, {0.4, 1}});
  const DenseMatrix expected = (1.0 / 0.84) * DenseMatrix{{1, -0.4}, {-0.4, 1}};
  CHECK(testing::max_abs_diff(inv, expected) <= 1e-14);
  CHECK(inv(0, 1) == inv(1, 0));
}

TEST_CASE("min_eigenvalue_sym examples") {
  CHECK(gdht::min_eigenvalue_sym(DenseMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(gdht::min_eigenvalue_sym(DenseMatrix{{0, 1}, {1, 0}}) == doctest::Approx(-1.0).epsilon(1e-12));
  const DenseMatrix band{{1, 0.4, 0}, {0.4, 1, 0.4}, {0, 0.4, 1}};
  CHECK(gdht::min_eigenvalue_sym(band) == doctest::Approx(1.0 - 0.4 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(gdht::min_eigenvalue_sym(band) == doctest::Approx(0.434315).epsilon(1e-6));
  CHECK_ERROR_KIND(gdht::min_eigenvalue_sym(DenseMatrix{{0, 1}, {2, 0}}), ErrorKind::NotSymmetric);
  CHECK_ERROR_KIND(gdht::min_eigenvalue_sym(DenseMatrix(3, 2)), ErrorKind::NotSquare);
}

TEST_CASE("cholesky reconstructs random SPD matrices") {
  gdht::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseMatrix a = testing::random_spd(8, rng);
    const DenseMatrix l = gdht::cholesky(a).lower;
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(l(i, i) > 0.0);
      for (std::size_t j = i + 1; j < 8; ++j) CHECK(l(i, j) == 0.0);
    }
    CHECK(testing::rel_frobenius(gdht::multiply(l, gdht::transpose(l)), a) <= 1e-10);
  }
}

TEST_CASE("log_det_spd matches the log of Jacobi eigenvalues") {
  gdht::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const DenseMatrix a = testing::random_spd(6, rng);
    double acc = 0.0;
    for (double e : gdht::symmetric_eigenvalues(a)) acc += std::log(e);
    CHECK(std::abs(gdht::log_det_spd(a) - acc) <= 1e-8);
  }
}

TEST_CASE("spd_inverse is an involution and a true inverse") {
  gdht::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseMatrix a = testing::random_spd(6, rng, 1.0);
    const DenseMatrix inv = gdht::spd_inverse(a);
    CHECK(gdht::is_symmetric(inv, 0.0));
    CHECK(testing::max_abs_diff(gdht::multiply(a, inv), DenseMatrix::identity(6)) <= 1e-8);
    CHECK(testing::rel_frobenius(gdht::spd_inverse(inv), a) <= 1e-6);
  }
}

TEST_CASE("min_eigenvalue_sym agrees with characteristic-polynomial roots") {
  gdht::Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const DenseMatrix a2 = testing::random_symmetric(2, rng);
    const double mean = 0.5 * (a2(0, 0) + a2(1, 1));
    const double half = 0.5 * (a2(0, 0) - a2(1, 1));
    const double root = mean - std::sqrt(half * half + a2(0, 1) * a2(0, 1));
    CHECK(std::abs(gdht::min_eigenvalue_sym(a2) - root) <= 1e-8);

    const DenseMatrix a3 = testing::random_symmetric(3, rng);
    const std::vector<double> roots = cubic_eigenvalues(a3);
    const std::vector<double> jacobi = gdht::symmetric_eigenvalues(a3);
    CHECK(std::abs(gdht::min_eigenvalue_sym(a3) - roots[0]) <= 1e-8);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(jacobi[k] - roots[k]) <= 1e-8);
  }
}

TEST_CASE("largest_gram_eigenvalue matches the Jacobi spectrum of XᵀX/n") {
  gdht::Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix x = testing::random_matrix(40, 7, rng);
    DenseMatrix g = gdht::gram(x);
    g *= 1.0 / 40.0;
    CHECK(gdht::largest_gram_eigenvalue(x) ==
          doctest::Approx(gdht::max_eigenvalue_sym(g)).epsilon(1e-7));
  }
}

TEST_CASE("is_positive_definite never throws") {
  CHECK(gdht::is_positive_definite(DenseMatrix::identity(2)));
  CHECK_FALSE(gdht::is_positive_definite(DenseMatrix{{1, 2}, {2, 1}}));
  CHECK_FALSE(gdht::is_positive_definite(DenseMatrix{{1, 2}, {0, 1}}));
  CHECK_FALSE(gdht::is_positive_definite(DenseMatrix(2, 3)));
}
