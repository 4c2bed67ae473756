#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/experiments.hpp"
#include "gdht/synthetic.hpp"

namespace gdht {

enum class Command { Generate, Init, Fit, ErrorCurve, Scaling, Compare, Ar1Fit };

std::string_view command_name(Command c);
/// Throws UnknownCommand.
Command parse_command(std::string_view name);

struct IoPaths {
  std::optional<std::filesystem::path> x;
  std::optional<std::filesystem::path> y;
  std::optional<std::filesystem::path> w_init;
  std::optional<std::filesystem::path> omega_init;
  std::optional<std::filesystem::path> w_star;
  std::optional<std::filesystem::path> omega_star;
  std::optional<std::filesystem::path> prices;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool verbose = false;

  // [data]
  InstanceSpec data;
  double train_fraction = 0.5;

  IoPaths io;

  // [solver], [lasso], [glasso], [tuning]
  PipelineConfig pipeline;

  // [experiment]
  std::size_t replications = 10;
  std::vector<std::size_t> n_values;  // empty: data.n

  // [scaling]
  std::vector<std::size_t> scaling_n{500, 1000, 2000, 4000};
  std::vector<std::size_t> scaling_s1{10, 20};
  std::vector<std::size_t> scaling_d;  // empty: data.d

  // [ar1]
  double ar1_train_fraction = 0.5;
};

/// Sectioned key = value text; '#' starts a comment. Every key is optional in
/// the file; unknown keys fail with UnknownKey, bad values with RangeError or
/// ParseError. `overrides` are "section.key=value" strings applied afterwards.
/// Relative input paths resolve against `base_dir`.
RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides = {});

/// Reads `path` (IoError if unreadable); relative paths resolve against its directory.
RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Every key, in a fixed order, with doubles in shortest round-trip form.
/// Parsing this text yields the same RunConfig.
std::string format_config(const RunConfig& cfg);

/// Cross-field checks that do not depend on the command (RangeError).
void validate_config(const RunConfig& cfg);

/// Experiment settings derived from the run config.
ExperimentConfig experiment_config(const RunConfig& cfg);
std::vector<ExperimentConfig> scaling_grid(const RunConfig& cfg);

}  // namespace gdht
