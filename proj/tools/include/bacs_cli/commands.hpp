#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bacs_cli/config.hpp"

namespace bacs::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3, kIoError = 4 };

/// Command-line values that override the config document.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<double> alpha;
  std::optional<double> c;
  std::optional<int> grid;
  std::optional<std::string> out;
};

/// Loads the config (or defaults) and applies the overrides.
Config resolve(const Overrides& o);

/// Streams one interval row per observation read from `in`.
void cmd_cs(const Config& cfg, std::istream& in, std::ostream& out);

/// Runs the scenario and writes the results CSV to `path`.
void cmd_simulate(const Config& cfg, std::uint64_t seed, const std::string& path);

/// Writes the summary JSON to `out`; the trace CSV goes to cfg.lucb.trace if set.
void cmd_lucb(const Config& cfg, std::uint64_t seed, std::ostream& out);

/// Streams theta-scale interval rows to `out`, then writes the stop-time
/// summary JSON to `summary`.
void cmd_ppi(const Config& cfg, std::optional<std::uint64_t> seed, std::ostream& out,
             std::ostream& summary);

/// Oracle coefficient and growth rate at every grid point.
void cmd_oracle(const Config& cfg, std::ostream& out);

/// Parses argv, dispatches, and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bacs::cli
