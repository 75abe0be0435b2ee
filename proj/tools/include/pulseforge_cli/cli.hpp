#pragma once

#include "pulseforge_cli/config.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>

namespace pulseforge::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kIoError = 4,
};

// Runs the configured pipeline, writing artifacts and manifest.json under
// the `out` directory. Returns the manifest. Errors propagate as
// pulseforge::Error; infeasible designs still write their manifest before
// throwing Error(InfeasibleTarget).
nlohmann::json run(const RunConfig& config, std::ostream& log);

// Full command line: parses flags, runs, maps errors to exit codes and
// prints "error: <category>: <message>" on err.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pulseforge::cli
