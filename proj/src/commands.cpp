#include "gdht/commands.hpp"

#include <ostream>

#include "gdht/error.hpp"
#include "gdht/ingest.hpp"
#include "gdht/io.hpp"
#include "gdht/linalg.hpp"
#include "gdht/objective.hpp"

namespace gdht {

namespace {

namespace fs = std::filesystem;

const fs::path& require_path(const std::optional<fs::path>& p, const char* key, Command c) {
  if (!p) {
    throw Error(ErrorKind::MissingRequired, std::string(key) + " is required for " +
                                                std::string(command_name(c)));
  }
  return *p;
}

std::string size_tag(const ScenarioSize& s) {
  return "n" + std::to_string(s.n) + "_d" + std::to_string(s.d) + "_m" + std::to_string(s.m);
}

Dataset load_dataset(const RunConfig& cfg, Command c) {
  DenseMatrix x = read_matrix_csv(require_path(cfg.io.x, "io.x", c));
  DenseMatrix y = read_matrix_csv(require_path(cfg.io.y, "io.y", c));
  return Dataset(std::move(x), std::move(y));
}

IterateObserver progress(const RunConfig& cfg, const Dataset& data, std::ostream& log) {
  if (!cfg.verbose) return {};
  return [&data, &log](std::size_t t, const JointParams& p) {
    log << "iter " << t << " loss " << format_real(loss(data, p)) << '\n';
  };
}

std::string init_summary(const InitResult& init, const LassoConfig& l, const GlassoConfig& g) {
  return "lambda1,lambda2,lasso_sweeps,lasso_converged,lasso_kkt_residual,glasso_sweeps,"
         "glasso_converged,ridge_added\n" +
         format_real(l.lambda1) + ',' + format_real(g.lambda2) + ',' +
         std::to_string(init.lasso.sweeps) + ',' + (init.lasso.converged ? "1" : "0") + ',' +
         format_real(init.lasso.kkt_residual) + ',' + std::to_string(init.glasso.sweeps) + ',' +
         (init.glasso.converged ? "1" : "0") + ',' + format_real(init.glasso.ridge_added) + '\n';
}

std::string fit_summary(const SolverConfig& s, const FitResult& f) {
  return "eta1,eta2,s1,s2,iterations_run,backtracks_total\n" + format_real(s.eta1) + ',' +
         format_real(s.eta2) + ',' + std::to_string(s.budget.s1) + ',' +
         std::to_string(s.budget.s2) + ',' + std::to_string(f.iterations_run) + ',' +
         std::to_string(f.backtracks_total) + '\n';
}

FitResult solve(const Dataset& data, const JointParams& init, const SolverConfig& solver,
                const GroundTruth* truth, std::uint64_t seed, const IterateObserver& obs) {
  return solver.resample ? gdht_fit_resampled(data, init, solver, seed, truth, obs)
                         : gdht_fit(data, init, solver, truth, obs);
}

void cmd_generate(const RunConfig& cfg, const fs::path& out) {
  const SyntheticInstance inst = make_instance(cfg.data, cfg.seed);
  write_matrix_csv(inst.data.x(), out / "x.csv");
  write_matrix_csv(inst.data.y(), out / "y.csv");
  write_matrix_csv(inst.truth.w_star, out / "w_star.csv");
  write_matrix_csv(inst.truth.omega_star, out / "omega_star.csv");
  write_matrix_csv(inst.truth.sigma_x, out / "sigma_x.csv");
}

void cmd_init(const RunConfig& cfg, const fs::path& out) {
  const Dataset data = load_dataset(cfg, Command::Init);
  const LassoConfig l = resolve_lasso(cfg.pipeline, data);
  const GlassoConfig g = resolve_glasso(cfg.pipeline, data);
  const InitResult init = initialize(data, l, g);
  write_matrix_csv(init.params.w, out / "w_init.csv");
  write_matrix_csv(init.params.omega, out / "omega_init.csv");
  write_text_file(out / "init_summary.csv", init_summary(init, l, g));
}

void cmd_fit(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const Dataset data = load_dataset(cfg, Command::Fit);

  std::optional<GroundTruth> truth;
  if (cfg.io.w_star || cfg.io.omega_star) {
    DenseMatrix w_star = read_matrix_csv(require_path(cfg.io.w_star, "io.w_star", Command::Fit));
    DenseMatrix omega_star =
        read_matrix_csv(require_path(cfg.io.omega_star, "io.omega_star", Command::Fit));
    // Σ_X only matters to generators; identity keeps GroundTruth well-formed.
    truth = GroundTruth::from(std::move(w_star), std::move(omega_star),
                              DenseMatrix::identity(data.d()));
  }

  std::optional<JointParams> init;
  if (cfg.io.w_init || cfg.io.omega_init) {
    DenseMatrix w = read_matrix_csv(require_path(cfg.io.w_init, "io.w_init", Command::Fit));
    DenseMatrix omega =
        read_matrix_csv(require_path(cfg.io.omega_init, "io.omega_init", Command::Fit));
    require_square(omega, "omega_init");
    init.emplace(std::move(w), symmetrize(omega));
  } else {
    const LassoConfig l = resolve_lasso(cfg.pipeline, data);
    const GlassoConfig g = resolve_glasso(cfg.pipeline, data);
    InitResult r = initialize(data, l, g);
    write_text_file(out / "init_summary.csv", init_summary(r, l, g));
    init.emplace(std::move(r.params));
  }

  std::optional<SparsityBudget> fallback;
  if (truth) fallback = SparsityBudget{truth->s1_star, truth->s2_star};
  const SolverConfig solver = resolve_solver(cfg.pipeline, data, *init, fallback);
  const FitResult fit = solve(data, *init, solver, truth ? &*truth : nullptr, cfg.seed,
                              progress(cfg, data, log));

  write_text_file(out / "trace.csv", format_trace_csv(fit.trace));
  write_matrix_csv(fit.params.w, out / "w_hat.csv");
  write_matrix_csv(fit.params.omega, out / "omega_hat.csv");
  write_text_file(out / "fit_summary.csv", fit_summary(solver, fit));
}

void cmd_error_curve(const RunConfig& cfg, const fs::path& out) {
  for (const auto& curve : run_error_curve(experiment_config(cfg))) {
    const std::string tag = size_tag(curve.size);
    write_text_file(out / ("error_curve_" + tag + ".csv"), format_trace_csv(curve.mean));
    write_text_file(out / ("replications_" + tag + ".csv"),
                    format_replications_csv(curve.replications));
  }
}

void cmd_scaling(const RunConfig& cfg, const fs::path& out) {
  const ScalingResult r = run_scaling(scaling_grid(cfg));
  std::string rows =
      "setting,n,n_train,d,m,s1_star,s2_star,rescaled_n_w,err_w_mean,rescaled_n_omega,"
      "err_omega_mean\n";
  for (const auto& row : r.rows) {
    rows += std::to_string(row.setting) + ',' + std::to_string(row.n) + ',' +
            std::to_string(row.n_train) + ',' + std::to_string(row.d) + ',' +
            std::to_string(row.m) + ',' + std::to_string(row.s1_star) + ',' +
            std::to_string(row.s2_star) + ',' + format_real(row.rescaled_n_w) + ',' +
            format_real(row.err_w_mean) + ',' + format_real(row.rescaled_n_omega) + ',' +
            format_real(row.err_omega_mean) + '\n';
  }
  write_text_file(out / "scaling.csv", rows);

  std::string summary = "statistic,setting,value\n";
  for (std::size_t k = 0; k < r.rate_spread_w.size(); ++k)
    summary += "rate_spread_w," + std::to_string(k) + ',' + format_real(r.rate_spread_w[k]) + '\n';
  summary += "collapse_w,," + format_real(r.collapse_w) + '\n';
  summary += "collapse_omega,," + format_real(r.collapse_omega) + '\n';
  write_text_file(out / "scaling_summary.csv", summary);
}

void cmd_compare(const RunConfig& cfg, const fs::path& out) {
  for (const auto& c : run_comparison(experiment_config(cfg))) {
    const std::string tag = size_tag(c.size);
    write_text_file(out / ("comparison_" + tag + ".csv"), format_comparison_csv(c.rows));
    write_text_file(out / ("replications_" + tag + ".csv"),
                    format_replications_csv(c.replications));
  }
}

void cmd_ar1_fit(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const PricePanel panel = load_price_csv(require_path(cfg.io.prices, "io.prices", Command::Ar1Fit));
  const Dataset data = build_ar1_dataset(log_ratio_transform(panel));
  const DatasetSplit split = temporal_split(data, cfg.ar1_train_fraction);

  const LassoConfig l = resolve_lasso(cfg.pipeline, split.train);
  const GlassoConfig g = resolve_glasso(cfg.pipeline, split.train);
  const InitResult init = initialize(split.train, l, g);
  const SolverConfig solver = resolve_solver(cfg.pipeline, split.train, init.params, std::nullopt);
  const FitResult fit = solve(split.train, init.params, solver, nullptr, cfg.seed,
                              progress(cfg, split.train, log));

  write_matrix_csv(init.params.w, out / "w_init.csv");
  write_matrix_csv(init.params.omega, out / "omega_init.csv");
  write_matrix_csv(fit.params.w, out / "w_hat.csv");
  write_matrix_csv(fit.params.omega, out / "omega_hat.csv");
  write_text_file(out / "trace.csv", format_trace_csv(fit.trace));
  write_text_file(out / "init_summary.csv", init_summary(init, l, g));
  write_text_file(out / "fit_summary.csv", fit_summary(solver, fit));

  std::string summary = "tickers,n_train,n_test,lasso_init_pred_err,gdht_pred_err\n";
  summary += std::to_string(panel.tickers.size()) + ',' + std::to_string(split.train.n()) + ',' +
             std::to_string(split.test.n()) + ',' +
             format_real(prediction_error(split.test, init.params.w)) + ',' +
             format_real(prediction_error(split.test, fit.params.w)) + '\n';
  write_text_file(out / "ar1_summary.csv", summary);
}

}  // namespace

void run_command(Command command, const RunConfig& cfg, const fs::path& out_dir,
                 std::ostream& log) {
  fs::create_directories(out_dir);
  write_text_file(out_dir / "resolved_config.ini", format_config(cfg));
  switch (command) {
    case Command::Generate: cmd_generate(cfg, out_dir); break;
    case Command::Init: cmd_init(cfg, out_dir); break;
    case Command::Fit: cmd_fit(cfg, out_dir, log); break;
    case Command::ErrorCurve: cmd_error_curve(cfg, out_dir); break;
    case Command::Scaling: cmd_scaling(cfg, out_dir); break;
    case Command::Compare: cmd_compare(cfg, out_dir); break;
    case Command::Ar1Fit: cmd_ar1_fit(cfg, out_dir, log); break;
  }
}

std::string format_failure(std::string_view kind, std::string_view command,
                           std::string_view message) {
  std::string clean;
  clean.reserve(message.size());
  for (char c : message) {
    if (c == '\n' || c == '\r') {
      clean += ' ';
    } else if (c == '"') {
      clean += '\'';
    } else {
      clean += c;
    }
  }
  return "error kind=" + std::string(kind) + " command=" + std::string(command) + " message=\"" +
         clean + "\"";
}

}  // namespace gdht
