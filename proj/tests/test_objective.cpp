#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gdht/linalg.hpp"
#include "gdht/objective.hpp"
#include "support.hpp"

using gdht::DenseMatrix;
using gdht::ErrorKind;

namespace {

struct Instance {
  gdht::Dataset data;
  gdht::JointParams params;
};

Instance random_instance(gdht::Rng& rng, std::size_t n, std::size_t d, std::size_t m) {
  DenseMatrix x = testing::random_matrix(n, d, rng);
  DenseMatrix y = testing::random_matrix(n, m, rng);
  DenseMatrix w = testing::random_matrix(d, m, rng, 0.5);
  DenseMatrix omega = testing::random_spd(m, rng, 0.5);
  return {gdht::Dataset(std::move(x), std::move(y)), gdht::JointParams(std::move(w), std::move(omega))};
}

// Σᵢ (yᵢ − Wᵀxᵢ)ᵀ Ω (yᵢ − Wᵀxᵢ) / n − log|Ω|, one sample at a time.
double loop_loss(const gdht::Dataset& data, const gdht::JointParams& p) {
  const std::size_t n = data.n(), d = data.d(), m = data.m();
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) {
      double fit = 0.0;
      for (std::size_t j = 0; j < d; ++j) fit += p.w(j, k) * data.x()(i, j);
      r[k] = data.y()(i, k) - fit;
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) quad += r[a] * p.omega(a, b) * r[b];
  }
  double logdet = 0.0;
  for (double e : gdht::symmetric_eigenvalues(p.omega)) logdet += std::log(e);
  return quad / static_cast<double>(n) - logdet;
}

bool close_relative(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

const gdht::Dataset& tiny() {
  static const gdht::Dataset data(DenseMatrix{{1}, {1}}, DenseMatrix{{1}, {3}});
  return data;
}

}  // namespace

TEST_CASE("loss examples") {
  gdht::Rng rng(21);
  Instance inst = random_instance(rng, 12, 3, 4);
  const gdht::JointParams id(inst.params.w, DenseMatrix::identity(4));
  const double rss = gdht::frobenius_norm(gdht::residual(inst.data, id.w));
  CHECK(gdht::loss(inst.data, id) == doctest::Approx(rss * rss / 12.0).epsilon(1e-14));

  const gdht::Dataset one(DenseMatrix{{1}}, DenseMatrix{{2}});
  CHECK(gdht::loss(one, gdht::JointParams(DenseMatrix{{0}}, DenseMatrix{{1}})) == 4.0);

  CHECK_ERROR_KIND(gdht::loss(one, gdht::JointParams(DenseMatrix{{0}}, DenseMatrix{{-1}})),
                   ErrorKind::NotPositiveDefinite);
}

TEST_CASE("loss matches a per-sample loop") {
  gdht::Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 10, 4, 3);
    CHECK(close_relative(gdht::loss(inst.data, inst.params), loop_loss(inst.data, inst.params),
                         1e-10));
  }
}

TEST_CASE("gradient and residual covariance hand examples") {
  const gdht::JointParams p(DenseMatrix{{0}}, DenseMatrix{{1}});
  CHECK(gdht::grad_w(tiny(), p) == DenseMatrix{{-4}});
  CHECK(gdht::grad_omega(tiny(), p) == DenseMatrix{{4}});
  CHECK(gdht::residual_covariance(tiny(), p.w).s == DenseMatrix{{5}});

  gdht::Rng rng(23);
  const DenseMatrix x = testing::random_matrix(6, 3, rng);
  const DenseMatrix w = testing::random_matrix(3, 2, rng);
  const gdht::Dataset exact(x, gdht::multiply(x, w));
  const gdht::JointParams at_w(w, testing::random_spd(2, rng));
  CHECK(gdht::max_abs(gdht::grad_w(exact, at_w)) <= 1e-12);
  CHECK(gdht::max_abs(gdht::residual_covariance(exact, w).s) <= 1e-24);

  CHECK_ERROR_KIND(gdht::grad_w(exact, gdht::JointParams(DenseMatrix(4, 2), DenseMatrix::identity(2))),
                   ErrorKind::DimensionMismatch);
  CHECK_ERROR_KIND(gdht::residual_covariance(exact, DenseMatrix(3, 3)), ErrorKind::DimensionMismatch);
  CHECK_ERROR_KIND(gdht::grad_omega(exact, gdht::JointParams(w, DenseMatrix{{1, 2}, {2, 1}})),
                   ErrorKind::NotPositiveDefinite);
}

TEST_CASE("grad_omega vanishes at the inverse residual covariance") {
  gdht::Rng rng(24);
  const Instance inst = random_instance(rng, 30, 4, 3);
  const DenseMatrix s = gdht::residual_covariance(inst.data, inst.params.w).s;
  const gdht::JointParams p(inst.params.w, gdht::spd_inverse(s));
  CHECK(gdht::max_abs(gdht::grad_omega(inst.data, p)) <= 1e-8);
}

TEST_CASE("grad_w accepts an indefinite Omega") {
  // grad_w takes no inverse, so an indefinite Ω is accepted.
  const gdht::JointParams p(DenseMatrix{{0}}, DenseMatrix{{-2}});
  CHECK(gdht::grad_w(tiny(), p) == DenseMatrix{{8}});
}

TEST_CASE("residual covariance is symmetric PSD") {
  gdht::Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 8, 3, 5);
    const DenseMatrix s = gdht::residual_covariance(inst.data, inst.params.w).s;
    CHECK(gdht::is_symmetric(s, 0.0));
    for (std::size_t i = 0; i < 5; ++i) CHECK(s(i, i) >= 0.0);
    for (double e : gdht::symmetric_eigenvalues(s)) CHECK(e >= -1e-12);
  }
}

TEST_CASE("both gradients match central finite differences of the loss") {
  const double h = 1e-5;
  gdht::Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMatrix x = testing::random_matrix(20, 8, rng);
    DenseMatrix y = testing::random_matrix(20, 5, rng);
    const gdht::Dataset data(std::move(x), std::move(y));
    const gdht::JointParams p(testing::random_matrix(8, 5, rng, 0.3), testing::random_spd(5, rng, 0.5));

    const DenseMatrix gw = gdht::grad_w(data, p);
    for (std::size_t j = 0; j < 8; ++j) {
      for (std::size_t k = 0; k < 5; ++k) {
        gdht::JointParams plus = p, minus = p;
        plus.w(j, k) += h;
        minus.w(j, k) -= h;
        const double fd = (gdht::loss(data, plus) - gdht::loss(data, minus)) / (2 * h);
        CHECK(close_relative(gw(j, k), fd, 1e-5));
      }
    }

    // Ω is parameterised by its free entries, so each off-diagonal
    // perturbation moves both (a,b) and (b,a); the entrywise gradient then
    // shows up twice in the directional derivative.
    const DenseMatrix go = gdht::grad_omega(data, p);
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a; b < 5; ++b) {
        gdht::JointParams plus = p, minus = p;
        plus.omega(a, b) += h;
        minus.omega(a, b) -= h;
        if (a != b) {
          plus.omega(b, a) += h;
          minus.omega(b, a) -= h;
        }
        const double fd = (gdht::loss(data, plus) - gdht::loss(data, minus)) / (2 * h);
        const double analytic = a == b ? go(a, a) : go(a, b) + go(b, a);
        CHECK(close_relative(analytic, fd, 1e-5));
      }
    }
  }
}

TEST_CASE("grad_omega is exactly symmetric") {
  gdht::Rng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 15, 4, 6);
    const DenseMatrix g = gdht::grad_omega(inst.data, inst.params);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) CHECK(g(i, j) == g(j, i));
  }
}

TEST_CASE("loss is convex along lines in each argument") {
  gdht::Rng rng(28);
  const DenseMatrix x = testing::random_matrix(40, 6, rng);
  const DenseMatrix w_star = testing::random_matrix(6, 4, rng);
  const DenseMatrix omega_star = testing::random_spd(4, rng, 1.0);
  DenseMatrix y = gdht::multiply(x, w_star) + testing::random_matrix(40, 4, rng, 0.3);
  const gdht::Dataset data(x, std::move(y));
  const double t = 1e-2;
  for (int dir = 0; dir < 20; ++dir) {
    const DenseMatrix dw = testing::random_matrix(6, 4, rng);
    const double f0 = gdht::loss(data, {w_star, omega_star});
    const double fp = gdht::loss(data, {w_star + t * dw, omega_star});
    const double fm = gdht::loss(data, {w_star - (t * dw), omega_star});
    CHECK(fp + fm - 2 * f0 >= -1e-8);

    const DenseMatrix dom = testing::random_symmetric(4, rng);
    const double gp = gdht::loss(data, {w_star, omega_star + t * dom});
    const double gm = gdht::loss(data, {w_star, omega_star - (t * dom)});
    CHECK(gp + gm - 2 * f0 >= -1e-8);
  }
}

TEST_CASE("loss is invariant under a joint row permutation") {
  gdht::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_instance(rng, 25, 5, 3);
    const std::vector<std::size_t> perm = rng.permutation(25);
    const gdht::Dataset shuffled(gdht::select_rows(inst.data.x(), perm),
                                 gdht::select_rows(inst.data.y(), perm));
    CHECK(close_relative(gdht::loss(shuffled, inst.params), gdht::loss(inst.data, inst.params),
                         1e-12));
  }
}
