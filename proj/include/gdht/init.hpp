#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gdht/matrix.hpp"
#include "gdht/model.hpp"
#include "gdht/objective.hpp"

namespace gdht {

struct LassoConfig {
  double lambda1 = 0.0;
  std::size_t max_sweeps = 1000;
  double tol = 1e-8;  // max |Δw| over a sweep

  void check() const;
};

struct LassoFit {
  DenseMatrix w;
  std::size_t sweeps = 0;  // largest sweep count over the columns
  bool converged = true;   // false: sweeps exhausted with KKT residual above 10·tol
  double kkt_residual = 0.0;
};

/// argmin_W (1/2n)‖Y − XW‖_F² + λ₁‖W‖₁,₁, column by column via cyclic
/// coordinate descent on the Gram form (1/n)XᵀX.
LassoFit lasso_init(const Dataset& data, const LassoConfig& cfg);

/// Stationarity violation max_j over coordinates: |g_j| − λ on zeros,
/// |g_j − λ·sign(w_j)| on nonzeros, where g = (1/n)Xᵀ(y − Xw). Per column of W.
double lasso_kkt_residual(const Dataset& data, const DenseMatrix& w, double lambda1);

struct GlassoConfig {
  double lambda2 = 0.0;
  std::size_t max_sweeps = 500;
  double tol = 1e-8;
  std::optional<double> ridge_floor;  // unset: 1e-8 · tr(S) / m

  void check() const;
};

struct GlassoFit {
  DenseMatrix omega;
  std::size_t sweeps = 0;
  bool converged = true;
  double ridge_added = 0.0;
  /// log|W_cov| + m after each sweep. This is the dual of the penalized
  /// objective; it is non-decreasing and meets the primal optimum at convergence.
  std::vector<double> dual_objective;
};

/// argmin_Ω −log|Ω| + tr(SΩ) + λ₂‖Ω‖₁,off by block coordinate descent over
/// the columns of the working covariance, whose diagonal is pinned to S.
GlassoFit glasso_init(const ResidualCovariance& s, const GlassoConfig& cfg);

/// −log|Ω| + tr(SΩ) + λ Σ_{i≠j} |Ω_ij|
double glasso_objective(const DenseMatrix& s, const DenseMatrix& omega, double lambda2);

struct InitResult {
  JointParams params;
  LassoFit lasso;
  GlassoFit glasso;
};

/// Lasso for W, then graphical Lasso on the residual covariance of that W.
InitResult initialize(const Dataset& data, const LassoConfig& lcfg, const GlassoConfig& gcfg);

/// c · ν̂ · √(log(dm) / n)
double default_lambda1(std::size_t n, std::size_t d, std::size_t m, double c = 0.5,
                       double nu_hat = 1.0);
/// c · ν̂ · √(log m / n)
double default_lambda2(std::size_t n, std::size_t m, double c = 0.5, double nu_hat = 1.0);

}  // namespace gdht
