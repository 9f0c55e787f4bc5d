#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "liespin_cli/scenario.hpp"

namespace liespin::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kInputError = 2 };

struct CommandContext {
  std::filesystem::path out_dir = ".";
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

int cmd_check(const Scenario& s, const CommandContext& ctx);
int cmd_solve(const Scenario& s, const CommandContext& ctx);
int cmd_oracle(const Scenario& s, const CommandContext& ctx);
int cmd_compare(const Scenario& s, const CommandContext& ctx);
int cmd_fsys(const Scenario& s, const CommandContext& ctx);

/// Loads `file`, applies the overrides and runs `command` on every scenario.
/// Batch files run concurrently; reports are printed in file order. Returns
/// the worst exit code over the scenarios.
int run_scenario_command(const std::string& command, const std::filesystem::path& file, const Overrides& overrides,
                         const CommandContext& ctx);

struct SelftestOptions {
  /// Flips the sign of every Lie bracket the suite evaluates.
  bool flip_bracket_sign = false;
};

int cmd_selftest(const SelftestOptions& options, const CommandContext& ctx);

/// %.17g, for CSV cells.
std::string format_double(double v);
/// %.10g, for human-readable reports.
std::string format_report(double v);

}  // namespace liespin::cli
