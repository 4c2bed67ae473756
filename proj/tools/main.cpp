// Command-line driver: gdht <command> --config <path> [--set section.key=value]... [--out <dir>]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdht/commands.hpp"
#include "gdht/config.hpp"
#include "gdht/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse multi-response regression with joint precision estimation"};
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  app.add_option("command", command,
                 "generate | init | fit | error-curve | scaling | compare | ar1-fit")
      ->required();
  app.add_option("--config", config_path, "Sectioned key = value config file")->required();
  app.add_option("--set", overrides, "Override, e.g. solver.iterations=5")->take_all();
  app.add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << gdht::format_failure("UsageError", command.empty() ? "-" : command, e.what())
              << '\n';
    return 2;
  }

  try {
    const gdht::Command cmd = gdht::parse_command(command);
    const gdht::RunConfig cfg = gdht::parse_config(config_path, overrides);
    gdht::run_command(cmd, cfg, out_dir, std::cerr);
  } catch (const gdht::Error& e) {
    std::cerr << gdht::format_failure(gdht::kind_name(e.kind()), command, e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << gdht::format_failure("Internal", command, e.what()) << '\n';
    return 1;
  }
  return 0;
}
