#include "gdht/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "gdht/error.hpp"

namespace gdht {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void range_error(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::RangeError,
              std::string(key) + " = '" + std::string(value) + "': " + std::string(why));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    range_error(key, v, "expected a finite number");
  }
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    range_error(key, v, "expected a non-negative integer");
  }
  return out;
}

std::size_t to_count(std::string_view key, std::string_view v, std::size_t min_value) {
  const std::uint64_t out = to_u64(key, v);
  if (out < min_value) range_error(key, v, "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(out);
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  range_error(key, v, "expected true or false");
}

double positive(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) range_error(key, v, "must be > 0");
  return x;
}

double non_negative(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  if (!(x >= 0.0)) range_error(key, v, "must be >= 0");
  return x;
}

double unit_open(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  if (!(x > 0.0 && x < 1.0)) range_error(key, v, "must lie in (0, 1)");
  return x;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  if (trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(trim(v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> to_count_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  for (auto item : split_list(v)) out.push_back(to_count(key, item, 1));
  return out;
}

std::vector<double> to_positive_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(positive(key, item));
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

template <typename T, typename F>
std::string fmt_list(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += f(v[i]);
  }
  return out;
}

std::string fmt_count(std::size_t x) { return std::to_string(x); }

std::string fmt_opt_double(const std::optional<double>& x) { return x ? fmt_double(*x) : ""; }

std::string fmt_path(const std::optional<std::filesystem::path>& p) {
  return p ? p->generic_string() : "";
}

struct Key {
  std::string_view name;  // "section.key"
  std::function<void(RunConfig&, std::string_view value, const std::filesystem::path& base)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Base = const std::filesystem::path&;

std::optional<std::filesystem::path> resolve_path(std::string_view v, Base base) {
  if (v.empty()) return std::nullopt;
  std::filesystem::path p{std::string(v)};
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

// Budget keys are optional individually but only take effect as a pair.
void set_budget_part(RunConfig& c, std::string_view key, std::string_view v, bool first) {
  if (v.empty()) {
    c.pipeline.budget.reset();
    return;
  }
  const std::size_t x = to_count(key, v, 1);
  SparsityBudget b = c.pipeline.budget.value_or(SparsityBudget{0, 0});
  (first ? b.s1 : b.s2) = x;
  c.pipeline.budget = b;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      // [run]
      {"run.seed", [](RunConfig& c, std::string_view v, Base) { c.seed = to_u64("run.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"run.threads",
       [](RunConfig& c, std::string_view v, Base) { c.threads = to_count("run.threads", v, 1); },
       [](const RunConfig& c) { return fmt_count(c.threads); }},
      {"run.verbose",
       [](RunConfig& c, std::string_view v, Base) { c.verbose = to_bool("run.verbose", v); },
       [](const RunConfig& c) { return fmt_bool(c.verbose); }},

      // [data]
      {"data.n", [](RunConfig& c, std::string_view v, Base) { c.data.n = to_count("data.n", v, 2); },
       [](const RunConfig& c) { return fmt_count(c.data.n); }},
      {"data.d", [](RunConfig& c, std::string_view v, Base) { c.data.d = to_count("data.d", v, 1); },
       [](const RunConfig& c) { return fmt_count(c.data.d); }},
      {"data.m", [](RunConfig& c, std::string_view v, Base) { c.data.m = to_count("data.m", v, 1); },
       [](const RunConfig& c) { return fmt_count(c.data.m); }},
      {"data.s1_star",
       [](RunConfig& c, std::string_view v, Base) { c.data.s1_star = to_count("data.s1_star", v, 1); },
       [](const RunConfig& c) { return fmt_count(c.data.s1_star); }},
      {"data.graph",
       [](RunConfig& c, std::string_view v, Base) {
         try {
           c.data.graph.kind = parse_graph_kind(v);
         } catch (const Error&) {
           range_error("data.graph", v, "expected band, hub or scale-free");
         }
       },
       [](const RunConfig& c) { return std::string(graph_kind_name(c.data.graph.kind)); }},
      {"data.hub_groups",
       [](RunConfig& c, std::string_view v, Base) {
         c.data.graph.hub_groups = to_count("data.hub_groups", v, 1);
       },
       [](const RunConfig& c) { return fmt_count(c.data.graph.hub_groups); }},
      {"data.hub_value",
       [](RunConfig& c, std::string_view v, Base) {
         c.data.graph.hub_value = to_double("data.hub_value", v);
       },
       [](const RunConfig& c) { return fmt_double(c.data.graph.hub_value); }},
      {"data.pd_margin",
       [](RunConfig& c, std::string_view v, Base) {
         c.data.graph.pd_margin = positive("data.pd_margin", v);
       },
       [](const RunConfig& c) { return fmt_double(c.data.graph.pd_margin); }},
      {"data.noiseless",
       [](RunConfig& c, std::string_view v, Base) {
         c.data.sampling.noiseless = to_bool("data.noiseless", v);
       },
       [](const RunConfig& c) { return fmt_bool(c.data.sampling.noiseless); }},
      {"data.normalize_rows",
       [](RunConfig& c, std::string_view v, Base) {
         c.data.sampling.normalize_rows = to_bool("data.normalize_rows", v);
       },
       [](const RunConfig& c) { return fmt_bool(c.data.sampling.normalize_rows); }},
      {"data.train_fraction",
       [](RunConfig& c, std::string_view v, Base) {
         c.train_fraction = unit_open("data.train_fraction", v);
       },
       [](const RunConfig& c) { return fmt_double(c.train_fraction); }},

      // [io]
      {"io.x", [](RunConfig& c, std::string_view v, Base b) { c.io.x = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.x); }},
      {"io.y", [](RunConfig& c, std::string_view v, Base b) { c.io.y = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.y); }},
      {"io.w_init",
       [](RunConfig& c, std::string_view v, Base b) { c.io.w_init = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.w_init); }},
      {"io.omega_init",
       [](RunConfig& c, std::string_view v, Base b) { c.io.omega_init = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.omega_init); }},
      {"io.w_star",
       [](RunConfig& c, std::string_view v, Base b) { c.io.w_star = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.w_star); }},
      {"io.omega_star",
       [](RunConfig& c, std::string_view v, Base b) { c.io.omega_star = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.omega_star); }},
      {"io.prices",
       [](RunConfig& c, std::string_view v, Base b) { c.io.prices = resolve_path(v, b); },
       [](const RunConfig& c) { return fmt_path(c.io.prices); }},

      // [solver]
      {"solver.iterations",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.iterations = to_count("solver.iterations", v, 1);
       },
       [](const RunConfig& c) { return fmt_count(c.pipeline.solver.iterations); }},
      {"solver.step_rule",
       [](RunConfig& c, std::string_view v, Base) {
         if (v == "theory") {
           c.pipeline.step_rule = StepRule::Theory;
         } else if (v == "fixed") {
           c.pipeline.step_rule = StepRule::Fixed;
         } else {
           range_error("solver.step_rule", v, "expected theory or fixed");
         }
       },
       [](const RunConfig& c) {
         return std::string(c.pipeline.step_rule == StepRule::Theory ? "theory" : "fixed");
       }},
      {"solver.eta1",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.eta1 = positive("solver.eta1", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.solver.eta1); }},
      {"solver.eta2",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.eta2 = positive("solver.eta2", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.solver.eta2); }},
      {"solver.nu",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.nu = to_double("solver.nu", v);
         if (!(c.pipeline.nu >= 1.0)) range_error("solver.nu", v, "must be >= 1");
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.nu); }},
      {"solver.tau",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.tau = to_double("solver.tau", v);
         if (!(c.pipeline.tau >= 1.0)) range_error("solver.tau", v, "must be >= 1");
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.tau); }},
      {"solver.s1",
       [](RunConfig& c, std::string_view v, Base) { set_budget_part(c, "solver.s1", v, true); },
       [](const RunConfig& c) {
         return c.pipeline.budget ? fmt_count(c.pipeline.budget->s1) : std::string();
       }},
      {"solver.s2",
       [](RunConfig& c, std::string_view v, Base) { set_budget_part(c, "solver.s2", v, false); },
       [](const RunConfig& c) {
         return c.pipeline.budget ? fmt_count(c.pipeline.budget->s2) : std::string();
       }},
      {"solver.resample",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.resample = to_bool("solver.resample", v);
       },
       [](const RunConfig& c) { return fmt_bool(c.pipeline.solver.resample); }},
      {"solver.rel_tol",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.rel_tol = non_negative("solver.rel_tol", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.solver.rel_tol); }},
      {"solver.backtrack_max",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.solver.backtrack_max = to_count("solver.backtrack_max", v, 0);
       },
       [](const RunConfig& c) { return fmt_count(c.pipeline.solver.backtrack_max); }},

      // [lasso]
      {"lasso.lambda1",
       [](RunConfig& c, std::string_view v, Base) {
         if (v.empty()) {
           c.pipeline.lambda1.reset();
         } else {
           c.pipeline.lambda1 = non_negative("lasso.lambda1", v);
         }
       },
       [](const RunConfig& c) { return fmt_opt_double(c.pipeline.lambda1); }},
      {"lasso.c",
       [](RunConfig& c, std::string_view v, Base) { c.pipeline.lambda1_c = non_negative("lasso.c", v); },
       [](const RunConfig& c) { return fmt_double(c.pipeline.lambda1_c); }},
      {"lasso.max_sweeps",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.lasso.max_sweeps = to_count("lasso.max_sweeps", v, 1);
       },
       [](const RunConfig& c) { return fmt_count(c.pipeline.lasso.max_sweeps); }},
      {"lasso.tol",
       [](RunConfig& c, std::string_view v, Base) { c.pipeline.lasso.tol = positive("lasso.tol", v); },
       [](const RunConfig& c) { return fmt_double(c.pipeline.lasso.tol); }},

      // [glasso]
      {"glasso.lambda2",
       [](RunConfig& c, std::string_view v, Base) {
         if (v.empty()) {
           c.pipeline.lambda2.reset();
         } else {
           c.pipeline.lambda2 = non_negative("glasso.lambda2", v);
         }
       },
       [](const RunConfig& c) { return fmt_opt_double(c.pipeline.lambda2); }},
      {"glasso.c",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.lambda2_c = non_negative("glasso.c", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.lambda2_c); }},
      {"glasso.max_sweeps",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.glasso.max_sweeps = to_count("glasso.max_sweeps", v, 1);
       },
       [](const RunConfig& c) { return fmt_count(c.pipeline.glasso.max_sweeps); }},
      {"glasso.tol",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.glasso.tol = positive("glasso.tol", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.glasso.tol); }},
      {"glasso.ridge_floor",
       [](RunConfig& c, std::string_view v, Base) {
         if (v.empty()) {
           c.pipeline.glasso.ridge_floor.reset();
         } else {
           c.pipeline.glasso.ridge_floor = non_negative("glasso.ridge_floor", v);
         }
       },
       [](const RunConfig& c) { return fmt_opt_double(c.pipeline.glasso.ridge_floor); }},

      // [tuning]
      {"tuning.nu_hat",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.lambda_nu_hat = positive("tuning.nu_hat", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.lambda_nu_hat); }},
      {"tuning.grid",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.lambda_grid = to_positive_list("tuning.grid", v);
       },
       [](const RunConfig& c) { return fmt_list(c.pipeline.lambda_grid, fmt_double); }},
      {"tuning.validation_fraction",
       [](RunConfig& c, std::string_view v, Base) {
         c.pipeline.lambda_validation_fraction = unit_open("tuning.validation_fraction", v);
       },
       [](const RunConfig& c) { return fmt_double(c.pipeline.lambda_validation_fraction); }},

      // [experiment]
      {"experiment.replications",
       [](RunConfig& c, std::string_view v, Base) {
         c.replications = to_count("experiment.replications", v, 1);
       },
       [](const RunConfig& c) { return fmt_count(c.replications); }},
      {"experiment.n_values",
       [](RunConfig& c, std::string_view v, Base) {
         c.n_values = to_count_list("experiment.n_values", v);
       },
       [](const RunConfig& c) { return fmt_list(c.n_values, fmt_count); }},

      // [scaling]
      {"scaling.n_values",
       [](RunConfig& c, std::string_view v, Base) {
         c.scaling_n = to_count_list("scaling.n_values", v);
       },
       [](const RunConfig& c) { return fmt_list(c.scaling_n, fmt_count); }},
      {"scaling.s1_values",
       [](RunConfig& c, std::string_view v, Base) {
         c.scaling_s1 = to_count_list("scaling.s1_values", v);
       },
       [](const RunConfig& c) { return fmt_list(c.scaling_s1, fmt_count); }},
      {"scaling.d_values",
       [](RunConfig& c, std::string_view v, Base) {
         c.scaling_d = to_count_list("scaling.d_values", v);
       },
       [](const RunConfig& c) { return fmt_list(c.scaling_d, fmt_count); }},

      // [ar1]
      {"ar1.train_fraction",
       [](RunConfig& c, std::string_view v, Base) {
         c.ar1_train_fraction = unit_open("ar1.train_fraction", v);
       },
       [](const RunConfig& c) { return fmt_double(c.ar1_train_fraction); }},
  };
  return table;
}

const Key& find_key(std::string_view name) {
  for (const auto& k : keys())
    if (k.name == name) return k;
  throw Error(ErrorKind::UnknownKey, "unknown config key '" + std::string(name) + "'");
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Generate: return "generate";
    case Command::Init: return "init";
    case Command::Fit: return "fit";
    case Command::ErrorCurve: return "error-curve";
    case Command::Scaling: return "scaling";
    case Command::Compare: return "compare";
    case Command::Ar1Fit: return "ar1-fit";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Generate, Command::Init, Command::Fit, Command::ErrorCurve,
                    Command::Scaling, Command::Compare, Command::Ar1Fit}) {
    if (command_name(c) == name) return c;
  }
  throw Error(ErrorKind::UnknownCommand, "unknown command '" + std::string(name) + "'");
}

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": key outside of a [section]");
    }
    const std::string name = section + "." + std::string(trim(line.substr(0, eq)));
    find_key(name).set(cfg, trim(line.substr(eq + 1)), base_dir);
  }

  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError, "override '" + o + "' is not section.key=value");
    }
    const std::string name(trim(std::string_view(o).substr(0, eq)));
    // Override paths are relative to the working directory, like any argument.
    find_key(name).set(cfg, trim(std::string_view(o).substr(eq + 1)),
                       std::filesystem::current_path());
  }

  validate_config(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path base = std::filesystem::absolute(path).parent_path();
  return parse_config_text(buf.str(), base, overrides);
}

std::string format_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    const auto dot = k.name.find('.');
    const std::string_view sec = k.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      section = std::string(sec);
      out += "[" + section + "]\n";
    }
    const std::string value = k.get(cfg);
    out += std::string(k.name.substr(dot + 1)) + (value.empty() ? " =" : " = " + value) + "\n";
  }
  return out;
}

void validate_config(const RunConfig& cfg) {
  const auto& d = cfg.data;
  if (d.s1_star > d.d * d.m) {
    throw Error(ErrorKind::RangeError, "data.s1_star = " + std::to_string(d.s1_star) +
                                           " exceeds d*m = " + std::to_string(d.d * d.m));
  }
  GraphSpec g = d.graph;
  g.m = d.m;
  try {
    g.check();
  } catch (const Error& e) {
    throw Error(ErrorKind::RangeError, std::string("data: ") + e.what());
  }
  if (cfg.pipeline.budget) {
    const SparsityBudget& b = *cfg.pipeline.budget;
    if (b.s1 == 0 || b.s2 == 0) {
      throw Error(ErrorKind::RangeError, "solver.s1 and solver.s2 must be set together");
    }
  }
  if (cfg.pipeline.step_rule == StepRule::Theory) {
    TheoryConstants tc{cfg.pipeline.nu, cfg.pipeline.tau, 1.0};
    tc.check();
  }
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
  ExperimentConfig e;
  e.sizes.clear();
  if (cfg.n_values.empty()) {
    e.sizes.push_back({cfg.data.n, cfg.data.d, cfg.data.m});
  } else {
    for (std::size_t n : cfg.n_values) e.sizes.push_back({n, cfg.data.d, cfg.data.m});
  }
  e.graph = cfg.data.graph;
  e.graph.m = cfg.data.m;
  e.s1_star = cfg.data.s1_star;
  e.replications = cfg.replications;
  e.master_seed = cfg.seed;
  e.train_fraction = cfg.train_fraction;
  e.sampling = cfg.data.sampling;
  e.pipeline = cfg.pipeline;
  e.threads = cfg.threads;
  return e;
}

std::vector<ExperimentConfig> scaling_grid(const RunConfig& cfg) {
  const std::vector<std::size_t> ds =
      cfg.scaling_d.empty() ? std::vector<std::size_t>{cfg.data.d} : cfg.scaling_d;
  std::vector<ExperimentConfig> grid;
  for (std::size_t d : ds) {
    for (std::size_t s1 : cfg.scaling_s1) {
      ExperimentConfig e = experiment_config(cfg);
      e.s1_star = s1;
      e.sizes.clear();
      for (std::size_t n : cfg.scaling_n) e.sizes.push_back({n, d, cfg.data.m});
      grid.push_back(std::move(e));
    }
  }
  return grid;
}

}  // namespace gdht
