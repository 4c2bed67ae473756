#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gdht/config.hpp"

namespace gdht {

/// Runs one command, writing its files under `out_dir` (created if needed)
/// next to resolved_config.ini. Progress lines go to `log` when cfg.verbose.
/// Errors propagate as gdht::Error.
void run_command(Command command, const RunConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& log);

/// One-line, machine-parsable failure report:
/// error kind=<Kind> command=<name> message="<text>"
std::string format_failure(std::string_view kind, std::string_view command,
                           std::string_view message);

}  // namespace gdht
