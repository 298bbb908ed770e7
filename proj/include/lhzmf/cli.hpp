#pragma once

// Command-line front end: parameter validation, dispatch, and CSV/JSON output.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lhz::cli {

enum class Command {
  FreeEnergy,
  SolveM,
  PhaseLine,
  CriticalPoint,
  JumpProfile,
  ScheduleCheck,
  Gap,
  GapScaling,
  LhzCounts,
};

enum class Format { Csv, Json };

/// Malformed invocation: unknown command or flag, missing or unparsable value,
/// unreadable config file.  Exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command;
  /// Resolved parameters keyed by flag name (without dashes), typed as JSON
  /// values.  Zero temperature is the string "inf".
  nlohmann::json params;
  Format format;
  /// Empty means standard output.
  std::string out;
  unsigned threads = 0;
};

std::string command_name(Command c);

/// argv without the program name.  Throws UsageError, or lhz::DomainError for
/// values outside an operation's domain.
RunConfig parse_args(const std::vector<std::string>& argv);

/// Runs a validated configuration.  Returns 0 on success, 1 on a domain error.
/// Output files are written atomically; nothing is left behind on failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with exit codes 0 / 1 (domain error) / 2 (usage error).
int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double x);

std::string usage();

}  // namespace lhz::cli
