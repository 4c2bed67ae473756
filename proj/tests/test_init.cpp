#include <cmath>
#include <vector>

#include "doctest.h"
#include "gdht/init.hpp"
#include "gdht/linalg.hpp"
#include "gdht/objective.hpp"
#include "gdht/synthetic.hpp"
#include "support.hpp"

using gdht::DenseMatrix;
using gdht::ErrorKind;

namespace {

double soft(double z, double t) { return z > t ? z - t : (z < -t ? z + t : 0.0); }

// Columns orthogonal with squared norm n, so (1/n)XᵀX = I.
DenseMatrix orthonormal_design(std::size_t n, std::size_t d, gdht::Rng& rng) {
  DenseMatrix x = testing::random_matrix(n, d, rng);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += x(i, j) * x(i, k);
      for (std::size_t i = 0; i < n; ++i) x(i, j) -= dot / static_cast<double>(n) * x(i, k);
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += x(i, j) * x(i, j);
    const double scale = std::sqrt(static_cast<double>(n) / norm2);
    for (std::size_t i = 0; i < n; ++i) x(i, j) *= scale;
  }
  return x;
}

double lasso_objective(const gdht::Dataset& data, const DenseMatrix& w, double lambda) {
  const double rss = gdht::frobenius_norm(gdht::residual(data, w));
  double l1 = 0.0;
  for (double v : w.values()) l1 += std::abs(v);
  return rss * rss / (2.0 * static_cast<double>(data.n())) + lambda * l1;
}

// Sample covariance of n draws from N(0, Ω⁻¹), for a Band precision on m = 3.
DenseMatrix band_sample_covariance(std::size_t n, gdht::Rng& rng) {
  const DenseMatrix band{{1, 0.4, 0}, {0.4, 1, 0.4}, {0, 0.4, 1}};
  const DenseMatrix l = gdht::cholesky(gdht::spd_inverse(band)).lower;
  const DenseMatrix z = testing::random_matrix(n, 3, rng);
  DenseMatrix e = gdht::multiply(z, gdht::transpose(l));
  DenseMatrix s = gdht::gram(e);
  s *= 1.0 / static_cast<double>(n);
  return s;
}

}  // namespace

TEST_CASE("config checks") {
  CHECK_ERROR_KIND(gdht::LassoConfig({-1.0, 10, 1e-8}).check(), ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(gdht::LassoConfig({1.0, 0, 1e-8}).check(), ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(gdht::LassoConfig({1.0, 10, 0.0}).check(), ErrorKind::InvalidConfig);
  gdht::GlassoConfig g;
  g.ridge_floor = -1.0;
  CHECK_ERROR_KIND(g.check(), ErrorKind::InvalidConfig);
}

TEST_CASE("lasso returns zero once lambda reaches the largest correlation") {
  gdht::Rng rng(51);
  const gdht::Dataset data(testing::random_matrix(30, 5, rng), testing::random_matrix(30, 3, rng));
  DenseMatrix c = gdht::transpose_multiply(data.x(), data.y());
  c *= 1.0 / 30.0;
  const gdht::LassoFit fit = gdht::lasso_init(data, {gdht::max_abs(c), 1000, 1e-10});
  CHECK(gdht::count_nonzero(fit.w) == 0);
  CHECK(fit.converged);
}

TEST_CASE("lasso on an orthonormal design is the soft-thresholded correlation") {
  gdht::Rng rng(52);
  const DenseMatrix x = orthonormal_design(40, 6, rng);
  const gdht::Dataset data(x, testing::random_matrix(40, 2, rng));
  DenseMatrix c = gdht::transpose_multiply(x, data.y());
  c *= 1.0 / 40.0;
  const double lambda = 0.1;
  const gdht::LassoFit fit = gdht::lasso_init(data, {lambda, 1000, 1e-12});
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(fit.w(j, k) - soft(c(j, k), lambda)) <= 1e-9);
}

TEST_CASE("lasso solution beats a grid around it") {
  gdht::Rng rng(53);
  DenseMatrix x = testing::random_matrix(15, 2, rng);
  for (std::size_t i = 0; i < 15; ++i) x(i, 1) += 0.5 * x(i, 0);
  DenseMatrix y(15, 1);
  for (std::size_t i = 0; i < 15; ++i) y(i, 0) = 1.5 * x(i, 0) - 0.2 * x(i, 1) + 0.3 * rng.normal();
  const gdht::Dataset data(std::move(x), std::move(y));
  const double lambda = 0.15;
  const gdht::LassoFit fit = gdht::lasso_init(data, {lambda, 10000, 1e-12});
  const double best = lasso_objective(data, fit.w, lambda);
  double worst_gap = 0.0;
  for (int a = -100; a <= 100; ++a) {
    for (int b = -100; b <= 100; ++b) {
      DenseMatrix w = fit.w;
      w(0, 0) += 0.005 * a;
      w(1, 0) += 0.005 * b;
      worst_gap = std::min(worst_gap, lasso_objective(data, w, lambda) - best);
    }
  }
  CHECK(worst_gap >= -1e-12);
}

TEST_CASE("lasso satisfies the stationarity conditions") {
  gdht::Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const gdht::Dataset data(testing::random_matrix(40, 12, rng), testing::random_matrix(40, 3, rng));
    const double tol = 1e-9;
    const double lambda = 0.05 + 0.02 * trial;
    const gdht::LassoFit fit = gdht::lasso_init(data, {lambda, 10000, tol});
    CHECK(fit.converged);
    CHECK(gdht::lasso_kkt_residual(data, fit.w, lambda) <= 10 * tol);

    DenseMatrix g = gdht::transpose_multiply(data.x(), gdht::residual(data, fit.w));
    g *= 1.0 / 40.0;
    for (std::size_t j = 0; j < 12; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(g(j, k)) <= lambda + 10 * tol);
        if (fit.w(j, k) != 0.0) {
          CHECK(std::abs(std::abs(g(j, k)) - lambda) <= 10 * tol);
          CHECK((g(j, k) > 0) == (fit.w(j, k) > 0));
        }
      }
    }
  }
}

TEST_CASE("lasso separates across response columns bit-exactly") {
  gdht::Rng rng(55);
  const DenseMatrix x = testing::random_matrix(35, 8, rng);
  const DenseMatrix y = testing::random_matrix(35, 4, rng);
  const gdht::LassoConfig cfg{0.08, 1000, 1e-9};
  const DenseMatrix joint = gdht::lasso_init(gdht::Dataset(x, y), cfg).w;
  for (std::size_t k = 0; k < 4; ++k) {
    DenseMatrix col(35, 1);
    for (std::size_t i = 0; i < 35; ++i) col(i, 0) = y(i, k);
    const DenseMatrix single = gdht::lasso_init(gdht::Dataset(x, col), cfg).w;
    for (std::size_t j = 0; j < 8; ++j) CHECK(single(j, 0) == joint(j, k));
  }
}

TEST_CASE("lasso pins an all-zero predictor at zero") {
  gdht::Rng rng(56);
  DenseMatrix x = testing::random_matrix(20, 3, rng);
  for (std::size_t i = 0; i < 20; ++i) x(i, 1) = 0.0;
  const gdht::LassoFit fit = gdht::lasso_init(gdht::Dataset(x, testing::random_matrix(20, 2, rng)),
                                              {0.01, 1000, 1e-10});
  CHECK(fit.w(1, 0) == 0.0);
  CHECK(fit.w(1, 1) == 0.0);
}

TEST_CASE("lasso is deterministic") {
  gdht::Rng rng(57);
  const gdht::Dataset data(testing::random_matrix(30, 10, rng), testing::random_matrix(30, 3, rng));
  CHECK(gdht::lasso_init(data, {0.05, 1000, 1e-9}).w == gdht::lasso_init(data, {0.05, 1000, 1e-9}).w);
}

TEST_CASE("glasso with no penalty inverts S") {
  gdht::Rng rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix s = testing::random_spd(5, rng, 0.5);
    gdht::GlassoConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_sweeps = 5000;
    const gdht::GlassoFit fit = gdht::glasso_init({s}, cfg);
    CHECK(fit.ridge_added == 0.0);
    CHECK(testing::max_abs_diff(fit.omega, gdht::spd_inverse(s)) <= 1e-6);
  }
}

TEST_CASE("glasso with a dominating penalty returns the diagonal inverse") {
  gdht::Rng rng(59);
  const DenseMatrix s = testing::random_spd(4, rng, 0.5);
  double off = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) off = std::max(off, std::abs(s(i, j)));
  gdht::GlassoConfig cfg;
  cfg.lambda2 = off;
  const gdht::GlassoFit fit = gdht::glasso_init({s}, cfg);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) {
        CHECK(fit.omega(i, i) == doctest::Approx(1.0 / s(i, i)).epsilon(1e-10));
      } else {
        CHECK(fit.omega(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("glasso meets the stationarity conditions on a Band sample") {
  gdht::Rng rng(60);
  const DenseMatrix s = band_sample_covariance(20000, rng);
  gdht::GlassoConfig cfg;
  cfg.lambda2 = 0.05;
  cfg.tol = 1e-12;
  cfg.max_sweeps = 5000;
  const gdht::GlassoFit fit = gdht::glasso_init({s}, cfg);
  CHECK(fit.converged);
  const DenseMatrix sigma = gdht::spd_inverse(fit.omega);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(std::abs(s(i, i) - sigma(i, i)) <= 1e-6);
      } else {
        CHECK(std::max(std::abs(s(i, j) - sigma(i, j)) - cfg.lambda2, 0.0) <= 1e-4);
      }
    }
  }
}

TEST_CASE("glasso dual objective is monotone and closes the duality gap") {
  gdht::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix s = gdht::residual_covariance(
                              gdht::Dataset(testing::random_matrix(30, 2, rng),
                                            testing::random_matrix(30, 6, rng)),
                              DenseMatrix(2, 6))
                              .s;
    gdht::GlassoConfig cfg;
    cfg.lambda2 = 0.1;
    cfg.tol = 1e-12;
    cfg.max_sweeps = 5000;
    const gdht::GlassoFit fit = gdht::glasso_init({s}, cfg);
    REQUIRE(!fit.dual_objective.empty());
    for (std::size_t k = 1; k < fit.dual_objective.size(); ++k)
      CHECK(fit.dual_objective[k] >= fit.dual_objective[k - 1] - 1e-10);
    const double primal = gdht::glasso_objective(s, fit.omega, cfg.lambda2);
    CHECK(std::abs(primal - fit.dual_objective.back()) <= 1e-6);
    CHECK(gdht::is_symmetric(fit.omega, 0.0));
    CHECK(gdht::is_positive_definite(fit.omega));
  }
}

TEST_CASE("glasso repairs a singular covariance with a recorded ridge") {
  // Rank one: S = vvᵀ.
  const DenseMatrix s{{1, 2, 3}, {2, 4, 6}, {3, 6, 9}};
  gdht::GlassoConfig cfg;
  cfg.lambda2 = 0.5;
  const gdht::GlassoFit fit = gdht::glasso_init({s}, cfg);
  CHECK(fit.ridge_added == doctest::Approx(1e-8 * 14.0 / 3.0));
  CHECK(gdht::is_positive_definite(fit.omega));
  CHECK_ERROR_KIND(gdht::glasso_init({DenseMatrix{{1, 0.5}, {0, 1}}}, cfg), ErrorKind::NotSymmetric);
  CHECK(gdht::glasso_init({DenseMatrix{{4}}}, cfg).omega == DenseMatrix{{0.25}});
}

TEST_CASE("initialize on a noiseless orthonormal toy") {
  gdht::Rng rng(62);
  const DenseMatrix x = orthonormal_design(60, 5, rng);
  DenseMatrix w_star(5, 2);
  w_star(0, 0) = 1.0;
  w_star(3, 0) = -0.8;
  w_star(2, 1) = 0.6;
  gdht::Rng noise_rng(63);
  DenseMatrix y = gdht::multiply(x, w_star);
  // A little noise keeps S nonsingular; it is far below the λ₁ scale.
  y += testing::random_matrix(60, 2, noise_rng, 1e-6);
  const gdht::Dataset data(x, std::move(y));
  const double lambda = 0.01;
  gdht::GlassoConfig g;
  g.lambda2 = 1e-3;
  const gdht::InitResult init = gdht::initialize(data, {lambda, 1000, 1e-12}, g);
  CHECK(gdht::frobenius_distance(init.params.w, w_star) <= 2 * lambda * std::sqrt(3.0));
}

TEST_CASE("initialize with only noise and a large penalty") {
  gdht::Rng rng(64);
  const DenseMatrix x = testing::random_matrix(50, 4, rng);
  const DenseMatrix y = testing::random_matrix(50, 3, rng);
  const gdht::Dataset data(x, y);
  gdht::GlassoConfig g;
  g.lambda2 = 0.05;
  const gdht::InitResult init = gdht::initialize(data, {100.0, 100, 1e-8}, g);
  CHECK(gdht::count_nonzero(init.params.w) == 0);
  DenseMatrix s = gdht::gram(y);
  s *= 1.0 / 50.0;
  CHECK(gdht::residual_covariance(data, init.params.w).s == s);
  CHECK(init.params.omega == gdht::glasso_init({s}, g).omega);
}

TEST_CASE("default regularization levels") {
  CHECK(gdht::default_lambda1(2000, 100, 10) ==
        doctest::Approx(0.5 * std::sqrt(std::log(1000.0) / 2000.0)).epsilon(1e-15));
  CHECK(gdht::default_lambda2(2000, 10, 1.0, 2.0) ==
        doctest::Approx(2.0 * std::sqrt(std::log(10.0) / 2000.0)).epsilon(1e-15));
}
