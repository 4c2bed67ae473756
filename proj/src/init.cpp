#include "gdht/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"

namespace gdht {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Cyclic coordinate descent on  ½ βᵀGβ − cᵀβ + λ‖β‖₁.
// `q` must hold Gβ on entry and holds it (up to accumulated round-off) on exit.
// Returns the number of sweeps run; stops once a sweep moves no coordinate by tol or more.
template <class GramAt>
std::size_t coordinate_descent(std::size_t p, const GramAt& g, std::span<const double> c,
                               double lambda, std::span<double> beta, std::span<double> q,
                               double tol, std::size_t max_sweeps) {
  std::size_t sweep = 0;
  while (sweep < max_sweeps) {
    ++sweep;
    double max_delta = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double gjj = g(j, j);
      const double rho = c[j] - q[j] + gjj * beta[j];
      if (!(gjj > 0.0)) {
        if (rho != 0.0) {
          throw Error(ErrorKind::ZeroColumn, "coordinate " + std::to_string(j) +
                                                 " has zero curvature but nonzero correlation");
        }
        beta[j] = 0.0;
        continue;
      }
      const double next = soft_threshold(rho, lambda) / gjj;
      const double delta = next - beta[j];
      if (delta == 0.0) continue;
      for (std::size_t k = 0; k < p; ++k) q[k] += g(k, j) * delta;
      beta[j] = next;
      max_delta = std::max(max_delta, std::abs(delta));
    }
    if (max_delta < tol) break;
  }
  return sweep;
}

template <class GramAt>
void refresh_product(std::size_t p, const GramAt& g, std::span<const double> beta,
                     std::span<double> q) {
  for (std::size_t i = 0; i < p; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < p; ++k)
      if (beta[k] != 0.0) acc += g(i, k) * beta[k];
    q[i] = acc;
  }
}

double kkt_violation(std::span<const double> grad, std::span<const double> beta, double lambda) {
  double worst = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    const double v = beta[j] == 0.0 ? std::max(std::abs(grad[j]) - lambda, 0.0)
                                    : std::abs(grad[j] - lambda * sign_of(beta[j]));
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

void LassoConfig::check() const {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) {
    throw Error(ErrorKind::InvalidConfig, "lambda1 must be finite and >= 0");
  }
  if (max_sweeps < 1) throw Error(ErrorKind::InvalidConfig, "lasso max_sweeps must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidConfig, "lasso tol must be > 0");
}

void GlassoConfig::check() const {
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
    throw Error(ErrorKind::InvalidConfig, "lambda2 must be finite and >= 0");
  }
  if (max_sweeps < 1) throw Error(ErrorKind::InvalidConfig, "glasso max_sweeps must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidConfig, "glasso tol must be > 0");
  if (ridge_floor && !(*ridge_floor >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "ridge_floor must be >= 0");
  }
}

LassoFit lasso_init(const Dataset& data, const LassoConfig& cfg) {
  cfg.check();
  const std::size_t d = data.d();
  const std::size_t m = data.m();
  const double inv_n = 1.0 / static_cast<double>(data.n());

  DenseMatrix g = gram(data.x());
  g *= inv_n;
  DenseMatrix xty = transpose_multiply(data.x(), data.y());
  xty *= inv_n;
  const auto gram_at = [&g](std::size_t i, std::size_t j) { return g(i, j); };

  LassoFit fit{DenseMatrix(d, m), 0, true, 0.0};
  std::vector<double> beta(d);
  std::vector<double> q(d);
  std::vector<double> c(d);
  std::vector<double> grad(d);
  const double kkt_target = 10.0 * cfg.tol;

  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t j = 0; j < d; ++j) c[j] = xty(j, col);
    std::fill(beta.begin(), beta.end(), 0.0);
    std::fill(q.begin(), q.end(), 0.0);

    std::size_t used = 0;
    double kkt = 0.0;
    while (true) {
      used += coordinate_descent(d, gram_at, c, cfg.lambda1, beta, q, cfg.tol,
                                 cfg.max_sweeps - used);
      refresh_product(d, gram_at, beta, q);
      for (std::size_t j = 0; j < d; ++j) grad[j] = c[j] - q[j];
      kkt = kkt_violation(grad, beta, cfg.lambda1);
      if (kkt <= kkt_target || used >= cfg.max_sweeps) break;
    }
    if (kkt > kkt_target) fit.converged = false;
    fit.kkt_residual = std::max(fit.kkt_residual, kkt);
    fit.sweeps = std::max(fit.sweeps, used);
    for (std::size_t j = 0; j < d; ++j) fit.w(j, col) = beta[j];
  }
  return fit;
}

double lasso_kkt_residual(const Dataset& data, const DenseMatrix& w, double lambda1) {
  DenseMatrix g = transpose_multiply(data.x(), residual(data, w));
  g *= 1.0 / static_cast<double>(data.n());
  double worst = 0.0;
  for (std::size_t j = 0; j < w.rows(); ++j) {
    for (std::size_t k = 0; k < w.cols(); ++k) {
      const double gj = g(j, k);
      const double v = w(j, k) == 0.0 ? std::max(std::abs(gj) - lambda1, 0.0)
                                      : std::abs(gj - lambda1 * sign_of(w(j, k)));
      worst = std::max(worst, v);
    }
  }
  return worst;
}

GlassoFit glasso_init(const ResidualCovariance& s_in, const GlassoConfig& cfg) {
  cfg.check();
  require_symmetric(s_in.s, "glasso_init");
  const std::size_t m = s_in.s.rows();
  DenseMatrix s = symmetrize(s_in.s);

  const double auto_floor = trace(s) > 0.0 ? 1e-8 * trace(s) / static_cast<double>(m) : 1e-8;
  const double floor = cfg.ridge_floor.value_or(auto_floor);
  double ridge = 0.0;
  if (min_eigenvalue_sym(s) < floor) {
    ridge = floor;
    for (std::size_t i = 0; i < m; ++i) s(i, i) += ridge;
  }

  GlassoFit fit{DenseMatrix(m, m), 0, false, ridge, {}};
  if (m == 1) {
    fit.omega(0, 0) = 1.0 / s(0, 0);
    fit.converged = true;
    fit.sweeps = 0;
    return fit;
  }

  double mean_abs_off = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) mean_abs_off += std::abs(s(i, j));
  mean_abs_off /= static_cast<double>(m * (m - 1));
  const double threshold = mean_abs_off > 0.0 ? cfg.tol * mean_abs_off : cfg.tol;
  const double inner_tol = 1e-2 * cfg.tol * std::max(1.0, max_abs(s));
  constexpr std::size_t kInnerMaxSweeps = 10000;

  DenseMatrix w = s;
  // betas(k, j) holds the coefficient of variable k in the regression for
  // column j; betas(j, j) is unused.
  DenseMatrix betas(m, m);
  std::vector<std::size_t> others(m - 1);
  std::vector<double> c(m - 1);
  std::vector<double> beta(m - 1);
  std::vector<double> q(m - 1);

  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double total_change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0, a = 0; k < m; ++k)
        if (k != j) others[a++] = k;
      const auto w11 = [&](std::size_t a, std::size_t b) { return w(others[a], others[b]); };
      for (std::size_t a = 0; a + 1 < m; ++a) {
        c[a] = s(others[a], j);
        beta[a] = betas(others[a], j);
      }
      refresh_product(m - 1, w11, beta, q);
      coordinate_descent(m - 1, w11, c, cfg.lambda2, beta, q, inner_tol, kInnerMaxSweeps);
      refresh_product(m - 1, w11, beta, q);
      for (std::size_t a = 0; a + 1 < m; ++a) {
        const std::size_t k = others[a];
        total_change += 2.0 * std::abs(q[a] - w(k, j));
        w(k, j) = q[a];
        w(j, k) = q[a];
        betas(k, j) = beta[a];
      }
    }
    fit.sweeps = sweep + 1;
    fit.dual_objective.push_back(is_positive_definite(w)
                                     ? log_det_spd(w) + static_cast<double>(m)
                                     : -std::numeric_limits<double>::infinity());
    if (total_change / static_cast<double>(m * (m - 1)) < threshold) {
      fit.converged = true;
      break;
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    double quad = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) quad += w(k, j) * betas(k, j);
    const double theta_jj = 1.0 / (w(j, j) - quad);
    fit.omega(j, j) = theta_jj;
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) fit.omega(k, j) = -betas(k, j) * theta_jj;
  }
  fit.omega = symmetrize(fit.omega);
  if (!fit.omega.all_finite() || !is_positive_definite(fit.omega)) {
    throw Error(ErrorKind::NotPositiveDefinite, "graphical lasso produced a non-SPD precision");
  }
  return fit;
}

double glasso_objective(const DenseMatrix& s, const DenseMatrix& omega, double lambda2) {
  require_same_shape(s, omega, "glasso_objective");
  double penalty = 0.0;
  for (std::size_t i = 0; i < omega.rows(); ++i)
    for (std::size_t j = 0; j < omega.cols(); ++j)
      if (i != j) penalty += std::abs(omega(i, j));
  return -log_det_spd(omega) + frobenius_inner(s, omega) + lambda2 * penalty;
}

InitResult initialize(const Dataset& data, const LassoConfig& lcfg, const GlassoConfig& gcfg) {
  LassoFit lasso = lasso_init(data, lcfg);
  const ResidualCovariance s = residual_covariance(data, lasso.w);
  GlassoFit glasso = glasso_init(s, gcfg);
  JointParams params(lasso.w, glasso.omega);
  return InitResult{std::move(params), std::move(lasso), std::move(glasso)};
}

double default_lambda1(std::size_t n, std::size_t d, std::size_t m, double c, double nu_hat) {
  return c * nu_hat *
         std::sqrt(std::log(static_cast<double>(d * m)) / static_cast<double>(n));
}

double default_lambda2(std::size_t n, std::size_t m, double c, double nu_hat) {
  return c * nu_hat * std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(n));
}

}  // namespace gdht
