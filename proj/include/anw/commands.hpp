#pragma once

#include "anw/config.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace anw {

inline constexpr std::string_view kToolName = "anw";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Command { supermodes, propagate, squeezing, cluster, sweep, optimize, qpm };

std::string_view to_string(Command cmd);
Command command_from_string(std::string_view name);
const std::vector<Command>& all_commands();

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitInvariant = 3 };

using Cell = std::variant<double, long long, std::string>;

/// Curves use long format (z, series, value); matrices and parameter tables
/// are wide with explicit row indices.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Computes a command's result. Throws ConfigError when the configuration
/// lacks what the command needs and InvariantError on numerical breaches.
Table compute_table(Command cmd, const RunConfig& cfg);

/// CSV with '# ' header lines (tool, version, command, config echo) or a
/// JSON object carrying the same fields plus columns and rows.
std::string render(const Table& table, Command cmd, const RunConfig& cfg);

/// Config text echoed in a rendered CSV or JSON output.
std::string echoed_config(std::string_view rendered);

/// Runs the command and writes to cfg.output.path, or to out when the path is
/// empty. Errors are reported on err; returns an ExitCode.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace anw
