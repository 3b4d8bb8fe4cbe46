#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace scipi::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kConverged = 0,
  kInputError = 1,
  kMaxIter = 2,
  kZeroGradient = 3,
  kVerifyFailed = 4,
};

/// Runs the command line `args` (without the program name) and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Serializes with every floating-point number printed as %.17g, object keys
/// in insertion order preserved by the json type, and non-finite values as
/// the strings "inf", "-inf", "nan".
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

/// Parses a trace document written by dump_json.
nlohmann::ordered_json parse_json(const std::string& text);

/// Converts a number read back from a trace, accepting the non-finite strings.
double json_number(const nlohmann::ordered_json& value);

}  // namespace scipi::cli
