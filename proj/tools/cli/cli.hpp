#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace densemimo::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDomain = 3,
  kValidationFailed = 4,
};

/// Runs one `densemimo` invocation; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "min:max:points[:lin|log]" (log spacing by default) into a strictly
/// increasing grid. Throws std::invalid_argument on malformed input.
std::vector<double> parse_grid(std::string_view text);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_number(double value);

}  // namespace densemimo::cli
