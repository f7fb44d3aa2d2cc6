#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "she/error.hpp"
#include "she_cli/config.hpp"

namespace she::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitVerdict = 4;

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "SHE_OUT_ROOT";

struct RunOptions {
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<double> tol;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;
  std::string message;
};

int exit_code_for(ErrorKind kind) noexcept;

/// --out, then the config's output_dir, then $SHE_OUT_ROOT, then "she_out".
std::string resolve_output_dir(const ExperimentConfig& config, const RunOptions& options);

/// Runs one command. Never throws for library errors: they map to exit codes
/// and a one-line message. A human-readable report goes to `report`.
RunResult run(Command command, ExperimentConfig config, const RunOptions& options, std::ostream& report);

/// Entry point shared by the executable and the tests.
int cli_main(int argc, char** argv);

}  // namespace she::cli
