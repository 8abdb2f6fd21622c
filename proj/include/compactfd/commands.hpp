#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "compactfd/config.hpp"

namespace compactfd {

/// Where a command writes its files and whether it reports progress.
struct CommandOptions {
  std::string out_dir = "out";
  bool quiet = false;
};

/// Single integration: solution.csv, stats.csv, meta.txt.
void cmd_run(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Base-scheme errors and rates against the reference: converge.csv, meta.txt.
void cmd_converge(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Errors and rates of the extrapolated solutions: richardson.csv, meta.txt.
void cmd_richardson(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Average relaxation iterations per step: iterations.csv, meta.txt.
void cmd_iterations(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Fastest regime per target error: efficiency.csv, plus every measured
/// regime in long format (regimes.csv) and meta.txt.
void cmd_efficiency(const RunConfig& config, const CommandOptions& options, std::ostream& log);

const std::vector<std::string>& command_names();
/// Dispatches by name; throws ConfigError for an unknown command.
void run_command(const std::string& name, const RunConfig& config, const CommandOptions& options,
                 std::ostream& log);

/// Full command line: parses flags, runs the command and maps failures to
/// exit codes (0 success, 1 solver failure, 2 configuration error).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compactfd
