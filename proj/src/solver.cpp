#include "gdht/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"
#include "gdht/objective.hpp"
#include "gdht/random.hpp"
#include "gdht/threshold.hpp"

namespace gdht {

namespace {

double relative_change(const DenseMatrix& next, const DenseMatrix& prev) {
  const double delta = frobenius_distance(next, prev);
  const double base = frobenius_norm(prev);
  if (base > 0.0) return delta / base;
  return delta > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

using GradientSource = std::function<const Dataset&(std::size_t)>;

FitResult run_gdht(const Dataset& data, const JointParams& init, const SolverConfig& cfg,
                   const GroundTruth* truth, const IterateObserver& observer,
                   const GradientSource& gradient_data) {
  const std::size_t d = data.d();
  const std::size_t m = data.m();
  if (init.w.rows() != d || init.w.cols() != m || init.omega.rows() != m) {
    throw Error(ErrorKind::DimensionMismatch, "initial estimate does not match the dataset");
  }
  if (truth != nullptr) {
    require_same_shape(truth->w_star, init.w, "ground truth W");
    require_same_shape(truth->omega_star, init.omega, "ground truth Omega");
  }
  const std::size_t s1 = cfg.budget.s1;
  const std::size_t s2 = cfg.budget.s2;

  const DenseMatrix omega_init = symmetrize(init.omega);
  JointParams current(ht(init.w, supp(init.w, s1)), ht(omega_init, supp_sym(omega_init, s2)));
  if (!is_positive_definite(current.omega)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "initial Omega is not positive definite after thresholding to s2=" +
                    std::to_string(s2));
  }

  std::vector<JointParams> iterates;
  iterates.reserve(cfg.iterations + 1);
  SolverTrace trace;
  trace.records.reserve(cfg.iterations + 1);

  auto record = [&](std::size_t t, std::optional<double> eta2_used) {
    TraceRecord rec;
    rec.t = t;
    rec.loss = loss(data, current);
    if (truth != nullptr) {
      rec.err_w = frobenius_distance(current.w, truth->w_star);
      rec.err_omega = frobenius_distance(current.omega, truth->omega_star);
    }
    rec.eta2_used = eta2_used;
    trace.records.push_back(rec);
    iterates.push_back(current);
    if (observer) observer(t, current);
  };

  record(0, std::nullopt);

  std::size_t backtracks = 0;
  std::size_t iterations_run = 0;
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const Dataset& batch = gradient_data(t);
    const DenseMatrix g_w = grad_w(batch, current);
    const DenseMatrix g_omega = grad_omega(batch, current);

    DenseMatrix w_half = current.w;
    w_half -= cfg.eta1 * g_w;
    if (!w_half.all_finite()) {
      throw Error(ErrorKind::NonFiniteEntry,
                  "W iterate diverged at iteration " + std::to_string(t + 1));
    }
    DenseMatrix w_next = ht(w_half, supp(w_half, s1));

    double eta2 = cfg.eta2;
    std::optional<DenseMatrix> omega_next;
    for (std::size_t attempt = 0; attempt <= cfg.backtrack_max; ++attempt) {
      DenseMatrix omega_half = current.omega;
      omega_half -= eta2 * g_omega;
      if (omega_half.all_finite()) {
        DenseMatrix candidate = ht(omega_half, supp_sym(omega_half, s2));
        if (is_positive_definite(candidate)) {
          omega_next = std::move(candidate);
          break;
        }
      }
      if (attempt == cfg.backtrack_max) break;
      eta2 *= 0.5;
      ++backtracks;
    }
    if (!omega_next) {
      throw Error(ErrorKind::PositiveDefiniteRecoveryFailed,
                  "no positive definite Omega after " + std::to_string(cfg.backtrack_max) +
                      " step halvings at iteration " + std::to_string(t + 1));
    }

    const bool converged =
        cfg.rel_tol > 0.0 && std::max(relative_change(w_next, current.w),
                                      relative_change(*omega_next, current.omega)) < cfg.rel_tol;
    current.w = std::move(w_next);
    current.omega = std::move(*omega_next);
    iterations_run = t + 1;
    record(t + 1, eta2);
    if (converged) break;
  }

  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    trace.records[k].opt_err_w = frobenius_distance(iterates[k].w, current.w);
    trace.records[k].opt_err_omega = frobenius_distance(iterates[k].omega, current.omega);
  }
  return FitResult{std::move(current), std::move(trace), iterations_run, backtracks};
}

}  // namespace

FitResult gdht_fit(const Dataset& data, const JointParams& init, const SolverConfig& cfg,
                   const GroundTruth* truth, const IterateObserver& observer) {
  if (cfg.resample) {
    throw Error(ErrorKind::InvalidConfig, "gdht_fit called with resample=true");
  }
  cfg.check(data.n(), data.d(), data.m());
  return run_gdht(data, init, cfg, truth, observer,
                  [&data](std::size_t) -> const Dataset& { return data; });
}

std::vector<std::vector<std::size_t>> resampling_slices(std::size_t n, std::size_t slices,
                                                        std::uint64_t seed) {
  if (slices == 0 || n / slices == 0) {
    throw Error(ErrorKind::SliceTooSmall, "cannot cut " + std::to_string(n) + " rows into " +
                                              std::to_string(slices) + " non-empty slices");
  }
  const std::size_t size = n / slices;
  Rng rng(seed);
  const std::vector<std::size_t> perm = rng.permutation(n);
  std::vector<std::vector<std::size_t>> out(slices);
  for (std::size_t t = 0; t < slices; ++t) {
    out[t].assign(perm.begin() + static_cast<std::ptrdiff_t>(t * size),
                  perm.begin() + static_cast<std::ptrdiff_t>((t + 1) * size));
    std::sort(out[t].begin(), out[t].end());
  }
  return out;
}

FitResult gdht_fit_resampled(const Dataset& data, const JointParams& init,
                             const SolverConfig& cfg, std::uint64_t seed,
                             const GroundTruth* truth, const IterateObserver& observer) {
  if (!cfg.resample) {
    throw Error(ErrorKind::InvalidConfig, "gdht_fit_resampled called with resample=false");
  }
  cfg.check(data.n(), data.d(), data.m());
  const auto slices = resampling_slices(data.n(), cfg.iterations, seed);
  std::vector<Dataset> batches;
  batches.reserve(slices.size());
  for (const auto& rows : slices) {
    batches.emplace_back(select_rows(data.x(), rows), select_rows(data.y(), rows));
  }
  return run_gdht(data, init, cfg, truth, observer,
                  [&batches](std::size_t t) -> const Dataset& { return batches[t]; });
}

StepSizes suggest_step_sizes(const TheoryConstants& tc) {
  tc.check();
  const double nu = tc.nu;
  const double tau = tc.tau;
  const double r2 = tc.r_norm * tc.r_norm;
  return StepSizes{2.0 * nu * tau / (2.0 * nu * nu * tau + 1.0),
                   1568.0 * r2 / (2401.0 * r2 * r2 + 256.0)};
}

SparsityBudget suggest_sparsity(std::size_t s1_star, std::size_t s2_star, double rho,
                                std::size_t d, std::size_t m) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorKind::RhoOutOfRange, "rho must lie in (0, 1), got " + std::to_string(rho));
  }
  if (s1_star < 1 || s2_star < 1) {
    throw Error(ErrorKind::BudgetOutOfRange, "true sparsity levels must be >= 1");
  }
  const double gap = 1.0 / rho - 1.0;
  const double factor = std::max(100.0 / 9.0, 16.0 / (gap * gap));
  // Tolerate round-off in factor * s so exact products (100/9 * 9) do not round up.
  auto scaled = [factor](std::size_t s) {
    const double v = factor * static_cast<double>(s);
    return static_cast<std::size_t>(std::ceil(v - 1e-9 * v));
  };
  SparsityBudget out{std::clamp<std::size_t>(scaled(s1_star), 1, d * m),
                     std::clamp<std::size_t>(scaled(s2_star), m, m * m)};
  out.check(d, m);
  return out;
}

}  // namespace gdht
