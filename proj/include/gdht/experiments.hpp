#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdht/ingest.hpp"
#include "gdht/init.hpp"
#include "gdht/model.hpp"
#include "gdht/solver.hpp"
#include "gdht/synthetic.hpp"

namespace gdht {

// ---------------------------------------------------------------------------
// Metrics

struct EstimationError {
  double err_w;
  double err_omega;
};

/// (‖Ŵ − W*‖_F, ‖Ω̂ − Ω*‖_F)
EstimationError estimation_error(const JointParams& est, const GroundTruth& truth);

/// (1 / (n_test · m)) ‖Y_test − X_test W‖_F²
double prediction_error(const Dataset& test, const DenseMatrix& w);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // unbiased; 0 for a single value
};

MeanSd mean_sd(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Pipeline: initializer + GD-HT with resolved tuning

enum class StepRule {
  Fixed,   // solver.eta1 / solver.eta2 as given
  Theory,  // suggest_step_sizes(ν, τ, R̂), η₁ divided by λ_max((1/n)XᵀX)
};

struct PipelineConfig {
  SolverConfig solver;
  /// Unset: the true budgets (synthetic runs) or the initializer's nonzero counts.
  std::optional<SparsityBudget> budget;
  StepRule step_rule = StepRule::Theory;
  double nu = 1.0;
  double tau = 1.0;

  LassoConfig lasso;
  GlassoConfig glasso;
  /// Unset: c · ν̂ · √(log(dm)/n) and c · ν̂ · √(log m / n).
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  double lambda1_c = 0.5;
  double lambda2_c = 0.5;
  double lambda_nu_hat = 1.0;
  /// Multipliers tried on both default λ constants. With two or more entries
  /// the training set is split (seeded, `lambda_validation_fraction` held out)
  /// and the multiplier with the smallest held-out prediction error is used
  /// for the final fit on the full training set. Ignored for explicit λ values.
  std::vector<double> lambda_grid;
  double lambda_validation_fraction = 0.2;
};

LassoConfig resolve_lasso(const PipelineConfig& cfg, const Dataset& data);
GlassoConfig resolve_glasso(const PipelineConfig& cfg, const Dataset& data);

/// R̂ = max(‖W_init‖_F, ‖Ω_init‖_F)
double estimate_r_norm(const JointParams& init);

StepSizes resolve_step_sizes(const PipelineConfig& cfg, const Dataset& data,
                             const JointParams& init);

/// Solver settings for one fit: steps resolved, budget from `cfg.budget`, then
/// `fallback` (if given), then the nonzero counts of `init` (s2 at least m).
SolverConfig resolve_solver(const PipelineConfig& cfg, const Dataset& data,
                            const JointParams& init,
                            const std::optional<SparsityBudget>& fallback);

struct PipelineResult {
  double lambda_multiplier;  // 1 unless a grid was searched
  InitResult init;
  FitResult fit;
  SolverConfig solver;  // as resolved
  double init_seconds;
  double fit_seconds;
};

/// Grid search over `cfg.lambda_grid`; returns 1 when no search applies.
double select_lambda_multiplier(const Dataset& train, const PipelineConfig& cfg,
                                const GroundTruth* truth, std::uint64_t seed);

/// Initialize on `train`, then run GD-HT (resampled when cfg.solver.resample, using `seed`).
PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& cfg,
                            const GroundTruth* truth, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct ScenarioSize {
  std::size_t n;
  std::size_t d;
  std::size_t m;
};

struct ExperimentConfig {
  std::vector<ScenarioSize> sizes{{2000, 100, 10}};
  GraphSpec graph;
  std::size_t s1_star = 20;
  std::size_t replications = 10;
  std::uint64_t master_seed = 1;
  double train_fraction = 0.5;
  SampleOptions sampling;
  PipelineConfig pipeline;
  std::size_t threads = 1;

  void check() const;
};

/// Seeded random split: floor(n · fraction) training rows, the rest for testing.
/// Row indices inside each side stay in ascending order.
DatasetSplit random_split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Seed used by the train/test split of an instance generated from `instance_seed`.
std::uint64_t split_seed(std::uint64_t instance_seed);

struct ReplicationOutcome {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t s1_star = 0;
  std::size_t s2_star = 0;
  EstimationError init_error{};
  EstimationError final_error{};
  double init_pred_error = 0.0;
  double final_pred_error = 0.0;
  double init_seconds = 0.0;
  double fit_seconds = 0.0;
  std::size_t backtracks = 0;
  SolverTrace trace;
};

/// One replication: instance from master_seed + r, random split, pipeline on the training half.
ReplicationOutcome run_replication(const ExperimentConfig& cfg, const ScenarioSize& size,
                                   std::size_t replication);

std::vector<ReplicationOutcome> run_replications(const ExperimentConfig& cfg,
                                                 const ScenarioSize& size);

struct ErrorCurve {
  ScenarioSize size;
  std::vector<TraceRecord> mean;  // replication average, truncated to the shortest trace
  std::vector<ReplicationOutcome> replications;
};

std::vector<ErrorCurve> run_error_curve(const ExperimentConfig& cfg);

/// Averages traces record by record over the common prefix.
std::vector<TraceRecord> average_traces(const std::vector<SolverTrace>& traces);

struct ScalingRow {
  std::size_t setting = 0;
  std::size_t n = 0;
  std::size_t n_train = 0;
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t s1_star = 0;
  std::size_t s2_star = 0;
  double rescaled_n_w = 0.0;      // n_train / (s1* log(dm))
  double err_w_mean = 0.0;
  double rescaled_n_omega = 0.0;  // n_train / (s2* log m)
  double err_omega_mean = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  /// Per setting: (max − min) / min of err_w · √(rescaled_n_w) over its n values.
  std::vector<double> rate_spread_w;
  /// Largest (max − min) / min across settings' log-log interpolated curves at
  /// shared rescaled-n points; NaN when the curves do not overlap.
  double collapse_w = 0.0;
  double collapse_omega = 0.0;
};

/// Each grid entry is one (d, s1*) setting whose `sizes` list the n values.
ScalingResult run_scaling(const std::vector<ExperimentConfig>& grid);

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

/// Curve-collapse statistic over the overlap of all curves' x ranges.
double collapse_spread(const std::vector<Curve>& curves);

struct ComparisonRow {
  std::string method;
  double est_err_mean = 0.0;
  double est_err_sd = 0.0;
  double pred_err_mean = 0.0;
  double pred_err_sd = 0.0;
  double wall_seconds = 0.0;
};

struct Comparison {
  ScenarioSize size;
  std::vector<ComparisonRow> rows;  // "lasso-init", then "gdht"
  std::vector<ReplicationOutcome> replications;
};

/// Aggregates per-replication outcomes into the two comparison rows.
std::vector<ComparisonRow> aggregate_comparison(const std::vector<ReplicationOutcome>& reps);

std::vector<Comparison> run_comparison(const ExperimentConfig& cfg);

}  // namespace gdht
