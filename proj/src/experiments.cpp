#include "gdht/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"
#include "gdht/random.hpp"

namespace gdht {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so the join order never affects the output. The
// exception of the lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

// Piecewise-linear interpolation of log y against log x; x ascending.
double interpolate_log_log(const Curve& c, double x) {
  const auto it = std::lower_bound(c.x.begin(), c.x.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - c.x.begin());
  if (hi < c.x.size() && c.x[hi] == x) return c.y[hi];
  if (hi == 0) hi = 1;
  if (hi >= c.x.size()) hi = c.x.size() - 1;
  const std::size_t lo = hi - 1;
  const double t = (std::log(x) - std::log(c.x[lo])) / (std::log(c.x[hi]) - std::log(c.x[lo]));
  return std::exp(std::log(c.y[lo]) + t * (std::log(c.y[hi]) - std::log(c.y[lo])));
}

}  // namespace

// ---------------------------------------------------------------------------
// Metrics

EstimationError estimation_error(const JointParams& est, const GroundTruth& truth) {
  require_same_shape(est.w, truth.w_star, "estimation_error W");
  require_same_shape(est.omega, truth.omega_star, "estimation_error Omega");
  return {frobenius_distance(est.w, truth.w_star),
          frobenius_distance(est.omega, truth.omega_star)};
}

double prediction_error(const Dataset& test, const DenseMatrix& w) {
  if (w.rows() != test.d() || w.cols() != test.m()) {
    throw Error(ErrorKind::ShapeMismatch, "prediction_error: W is " + std::to_string(w.rows()) +
                                              "x" + std::to_string(w.cols()) + ", expected " +
                                              std::to_string(test.d()) + "x" +
                                              std::to_string(test.m()));
  }
  const DenseMatrix r = test.y() - multiply(test.x(), w);
  const double norm = frobenius_norm(r);
  return norm * norm / static_cast<double>(test.n() * test.m());
}

MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorKind::InvalidConfig, "mean_sd of an empty sample");
  MeanSd out;
  out.mean = mean_of(values);
  if (values.size() > 1) {
    double acc = 0.0;
    for (double x : values) acc += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(acc / static_cast<double>(values.size() - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

LassoConfig resolve_lasso(const PipelineConfig& cfg, const Dataset& data) {
  LassoConfig out = cfg.lasso;
  out.lambda1 = cfg.lambda1.value_or(
      default_lambda1(data.n(), data.d(), data.m(), cfg.lambda1_c, cfg.lambda_nu_hat));
  return out;
}

GlassoConfig resolve_glasso(const PipelineConfig& cfg, const Dataset& data) {
  GlassoConfig out = cfg.glasso;
  out.lambda2 =
      cfg.lambda2.value_or(default_lambda2(data.n(), data.m(), cfg.lambda2_c, cfg.lambda_nu_hat));
  return out;
}

double estimate_r_norm(const JointParams& init) {
  return std::max(frobenius_norm(init.w), frobenius_norm(init.omega));
}

StepSizes resolve_step_sizes(const PipelineConfig& cfg, const Dataset& data,
                             const JointParams& init) {
  if (cfg.step_rule == StepRule::Fixed) return {cfg.solver.eta1, cfg.solver.eta2};
  TheoryConstants tc{cfg.nu, cfg.tau, estimate_r_norm(init)};
  StepSizes steps = suggest_step_sizes(tc);
  // The W-block curvature is 2 λ_max(XᵀX/n) λ_max(Ω); the theory step assumes both are O(1).
  const double design_scale = largest_gram_eigenvalue(data.x());
  const double omega_scale = max_eigenvalue_sym(symmetrize(init.omega));
  const double scale = design_scale * omega_scale;
  if (scale > 0.0 && std::isfinite(scale)) steps.eta1 /= scale;
  return steps;
}

SolverConfig resolve_solver(const PipelineConfig& cfg, const Dataset& data,
                            const JointParams& init,
                            const std::optional<SparsityBudget>& fallback) {
  SolverConfig out = cfg.solver;
  const StepSizes steps = resolve_step_sizes(cfg, data, init);
  out.eta1 = steps.eta1;
  out.eta2 = steps.eta2;
  if (cfg.budget) {
    out.budget = *cfg.budget;
  } else if (fallback) {
    out.budget = *fallback;
  } else {
    const std::size_t m = data.m();
    out.budget.s1 = std::max<std::size_t>(1, count_nonzero(init.w));
    out.budget.s2 = std::clamp<std::size_t>(count_nonzero(init.omega), m, m * m);
  }
  return out;
}

namespace {

struct FitOnce {
  InitResult init;
  FitResult fit;
  SolverConfig solver;
  double init_seconds;
  double fit_seconds;
};

FitOnce fit_once(const Dataset& train, const PipelineConfig& cfg, const GroundTruth* truth,
                 std::uint64_t seed) {
  const LassoConfig lcfg = resolve_lasso(cfg, train);
  const GlassoConfig gcfg = resolve_glasso(cfg, train);

  const auto init_start = Clock::now();
  InitResult init = initialize(train, lcfg, gcfg);
  const double init_seconds = seconds_since(init_start);

  std::optional<SparsityBudget> fallback;
  if (truth != nullptr) fallback = SparsityBudget{truth->s1_star, truth->s2_star};
  const SolverConfig solver = resolve_solver(cfg, train, init.params, fallback);

  const auto fit_start = Clock::now();
  FitResult fit = solver.resample ? gdht_fit_resampled(train, init.params, solver, seed, truth)
                                  : gdht_fit(train, init.params, solver, truth);
  const double fit_seconds = seconds_since(fit_start);
  return FitOnce{std::move(init), std::move(fit), solver, init_seconds, fit_seconds};
}

PipelineConfig with_multiplier(const PipelineConfig& cfg, double k) {
  PipelineConfig out = cfg;
  out.lambda1_c *= k;
  out.lambda2_c *= k;
  return out;
}

}  // namespace

double select_lambda_multiplier(const Dataset& train, const PipelineConfig& cfg,
                                const GroundTruth* truth, std::uint64_t seed) {
  if (cfg.lambda_grid.size() < 2 || (cfg.lambda1 && cfg.lambda2)) return 1.0;
  const DatasetSplit inner =
      random_split(train, 1.0 - cfg.lambda_validation_fraction, seed ^ 0xC2B2AE3D27D4EB4FULL);
  double best = cfg.lambda_grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double k : cfg.lambda_grid) {
    const FitOnce f = fit_once(inner.train, with_multiplier(cfg, k), truth, seed);
    const double err = prediction_error(inner.test, f.fit.params.w);
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return best;
}

PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& cfg,
                            const GroundTruth* truth, std::uint64_t seed) {
  const double k = select_lambda_multiplier(train, cfg, truth, seed);
  FitOnce f = fit_once(train, with_multiplier(cfg, k), truth, seed);
  return PipelineResult{k, std::move(f.init), std::move(f.fit), f.solver, f.init_seconds,
                        f.fit_seconds};
}

// ---------------------------------------------------------------------------
// Experiments

void ExperimentConfig::check() const {
  if (sizes.empty()) throw Error(ErrorKind::InvalidConfig, "experiment needs at least one size");
  for (const auto& s : sizes) {
    if (s.n == 0 || s.d == 0 || s.m == 0) {
      throw Error(ErrorKind::InvalidConfig, "scenario sizes must be positive");
    }
    if (s1_star < 1 || s1_star > s.d * s.m) {
      throw Error(ErrorKind::InvalidConfig,
                  "s1_star=" + std::to_string(s1_star) + " outside [1, d*m]");
    }
  }
  if (replications < 1) throw Error(ErrorKind::InvalidConfig, "replications must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "train_fraction must lie in (0, 1)");
  }
  if (threads < 1) throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
  GraphSpec g = graph;
  for (const auto& s : sizes) {
    g.m = s.m;
    g.check();
  }
}

std::uint64_t split_seed(std::uint64_t instance_seed) {
  return instance_seed ^ 0x9E3779B97F4A7C15ULL;
}

DatasetSplit random_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::RangeError, "train_fraction must lie in (0, 1)");
  }
  const std::size_t n = data.n();
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    throw Error(ErrorKind::TooFewRows,
                "random split of " + std::to_string(n) + " rows leaves an empty side");
  }
  Rng rng(seed);
  std::vector<std::size_t> perm = rng.permutation(n);
  std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return DatasetSplit{Dataset(select_rows(data.x(), train), select_rows(data.y(), train)),
                      Dataset(select_rows(data.x(), test), select_rows(data.y(), test)),
                      std::move(train), std::move(test)};
}

ReplicationOutcome run_replication(const ExperimentConfig& cfg, const ScenarioSize& size,
                                   std::size_t replication) {
  InstanceSpec spec{size.n, size.d, size.m, cfg.s1_star, cfg.graph, cfg.sampling};
  const std::uint64_t seed = cfg.master_seed + replication;
  const SyntheticInstance inst = make_instance(spec, seed);
  const DatasetSplit split = random_split(inst.data, cfg.train_fraction, split_seed(seed));

  const PipelineResult res = run_pipeline(split.train, cfg.pipeline, &inst.truth, seed);

  ReplicationOutcome out;
  out.replication = replication;
  out.seed = seed;
  out.n_train = split.train.n();
  out.s1_star = inst.truth.s1_star;
  out.s2_star = inst.truth.s2_star;
  out.init_error = estimation_error(res.init.params, inst.truth);
  out.final_error = estimation_error(res.fit.params, inst.truth);
  out.init_pred_error = prediction_error(split.test, res.init.params.w);
  out.final_pred_error = prediction_error(split.test, res.fit.params.w);
  out.init_seconds = res.init_seconds;
  out.fit_seconds = res.fit_seconds;
  out.backtracks = res.fit.backtracks_total;
  out.trace = res.fit.trace;
  return out;
}

std::vector<ReplicationOutcome> run_replications(const ExperimentConfig& cfg,
                                                 const ScenarioSize& size) {
  cfg.check();
  std::vector<ReplicationOutcome> out(cfg.replications);
  parallel_for(cfg.replications, cfg.threads,
               [&](std::size_t r) { out[r] = run_replication(cfg, size, r); });
  return out;
}

std::vector<TraceRecord> average_traces(const std::vector<SolverTrace>& traces) {
  if (traces.empty()) return {};
  std::size_t len = traces.front().records.size();
  for (const auto& t : traces) len = std::min(len, t.records.size());
  const double k = static_cast<double>(traces.size());

  std::vector<TraceRecord> mean(len);
  for (std::size_t i = 0; i < len; ++i) {
    TraceRecord& out = mean[i];
    out.t = traces.front().records[i].t;
    bool have_err = true;
    bool have_eta = true;
    double err_w = 0.0, err_omega = 0.0, eta = 0.0;
    for (const auto& t : traces) {
      const TraceRecord& r = t.records[i];
      out.loss += r.loss;
      out.opt_err_w += r.opt_err_w;
      out.opt_err_omega += r.opt_err_omega;
      if (r.err_w && r.err_omega) {
        err_w += *r.err_w;
        err_omega += *r.err_omega;
      } else {
        have_err = false;
      }
      if (r.eta2_used) {
        eta += *r.eta2_used;
      } else {
        have_eta = false;
      }
    }
    out.loss /= k;
    out.opt_err_w /= k;
    out.opt_err_omega /= k;
    if (have_err) {
      out.err_w = err_w / k;
      out.err_omega = err_omega / k;
    }
    if (have_eta) out.eta2_used = eta / k;
  }
  return mean;
}

std::vector<ErrorCurve> run_error_curve(const ExperimentConfig& cfg) {
  cfg.check();
  std::vector<ErrorCurve> out;
  for (const auto& size : cfg.sizes) {
    ErrorCurve curve{size, {}, run_replications(cfg, size)};
    std::vector<SolverTrace> traces;
    traces.reserve(curve.replications.size());
    for (const auto& r : curve.replications) traces.push_back(r.trace);
    curve.mean = average_traces(traces);
    out.push_back(std::move(curve));
  }
  return out;
}

double collapse_spread(const std::vector<Curve>& curves) {
  if (curves.size() < 2) return 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::set<double> points;
  for (const auto& c : curves) {
    if (c.x.empty() || c.x.size() != c.y.size()) {
      throw Error(ErrorKind::InvalidConfig, "collapse_spread: malformed curve");
    }
    lo = std::max(lo, c.x.front());
    hi = std::min(hi, c.x.back());
    points.insert(c.x.begin(), c.x.end());
  }
  if (lo > hi) return std::numeric_limits<double>::quiet_NaN();

  double worst = 0.0;
  for (double x : points) {
    if (x < lo || x > hi) continue;
    std::vector<double> ys;
    ys.reserve(curves.size());
    for (const auto& c : curves) ys.push_back(interpolate_log_log(c, x));
    worst = std::max(worst, relative_spread(ys));
  }
  return worst;
}

ScalingResult run_scaling(const std::vector<ExperimentConfig>& grid) {
  std::set<std::pair<std::size_t, std::size_t>> settings;
  for (const auto& cfg : grid) {
    cfg.check();
    std::set<std::size_t> ns;
    for (const auto& s : cfg.sizes) {
      if (s.d != cfg.sizes.front().d || s.m != cfg.sizes.front().m) {
        throw Error(ErrorKind::InvalidConfig, "a scaling setting must keep d and m fixed");
      }
      ns.insert(s.n);
    }
    if (ns.size() < 4) {
      throw Error(ErrorKind::GridTooSmall, "each scaling setting needs at least 4 values of n");
    }
    settings.emplace(cfg.sizes.front().d, cfg.s1_star);
  }
  if (settings.size() < 2) {
    throw Error(ErrorKind::GridTooSmall, "scaling needs at least 2 distinct (d, s1_star) settings");
  }

  ScalingResult out;
  std::vector<Curve> curves_w;
  std::vector<Curve> curves_omega;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ExperimentConfig& cfg = grid[k];
    std::vector<ScalingRow> rows;
    for (const auto& size : cfg.sizes) {
      const auto reps = run_replications(cfg, size);
      std::vector<double> ew, eo, s2;
      for (const auto& r : reps) {
        ew.push_back(r.final_error.err_w);
        eo.push_back(r.final_error.err_omega);
        s2.push_back(static_cast<double>(r.s2_star));
      }
      ScalingRow row;
      row.setting = k;
      row.n = size.n;
      row.n_train = reps.front().n_train;
      row.d = size.d;
      row.m = size.m;
      row.s1_star = cfg.s1_star;
      row.s2_star = reps.front().s2_star;
      const double nt = static_cast<double>(row.n_train);
      row.rescaled_n_w =
          nt / (static_cast<double>(cfg.s1_star) * std::log(static_cast<double>(size.d * size.m)));
      row.err_w_mean = mean_of(ew);
      row.rescaled_n_omega = size.m > 1 ? nt / (mean_of(s2) * std::log(static_cast<double>(size.m)))
                                        : std::numeric_limits<double>::infinity();
      row.err_omega_mean = mean_of(eo);
      rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(),
              [](const ScalingRow& a, const ScalingRow& b) { return a.n < b.n; });

    Curve cw, co;
    std::vector<double> scaled;
    for (const auto& row : rows) {
      cw.x.push_back(row.rescaled_n_w);
      cw.y.push_back(row.err_w_mean);
      co.x.push_back(row.rescaled_n_omega);
      co.y.push_back(row.err_omega_mean);
      scaled.push_back(row.err_w_mean * std::sqrt(row.rescaled_n_w));
    }
    out.rate_spread_w.push_back(relative_spread(scaled));
    curves_w.push_back(std::move(cw));
    curves_omega.push_back(std::move(co));
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  out.collapse_w = collapse_spread(curves_w);
  out.collapse_omega = collapse_spread(curves_omega);
  return out;
}

std::vector<ComparisonRow> aggregate_comparison(const std::vector<ReplicationOutcome>& reps) {
  if (reps.empty()) throw Error(ErrorKind::InvalidConfig, "no replications to aggregate");
  std::vector<double> est_init, est_fit, pred_init, pred_fit, sec_init, sec_fit;
  for (const auto& r : reps) {
    est_init.push_back(r.init_error.err_w);
    est_fit.push_back(r.final_error.err_w);
    pred_init.push_back(r.init_pred_error);
    pred_fit.push_back(r.final_pred_error);
    sec_init.push_back(r.init_seconds);
    // The refinement cannot run without its initializer, so its cost includes it.
    sec_fit.push_back(r.init_seconds + r.fit_seconds);
  }
  auto row = [](std::string name, const std::vector<double>& est, const std::vector<double>& pred,
                const std::vector<double>& secs) {
    const MeanSd e = mean_sd(est);
    const MeanSd p = mean_sd(pred);
    return ComparisonRow{std::move(name), e.mean, e.sd, p.mean, p.sd, mean_of(secs)};
  };
  return {row("lasso-init", est_init, pred_init, sec_init),
          row("gdht", est_fit, pred_fit, sec_fit)};
}

std::vector<Comparison> run_comparison(const ExperimentConfig& cfg) {
  cfg.check();
  std::vector<Comparison> out;
  for (const auto& size : cfg.sizes) {
    Comparison c{size, {}, run_replications(cfg, size)};
    c.rows = aggregate_comparison(c.replications);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace gdht
