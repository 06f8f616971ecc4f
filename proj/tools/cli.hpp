#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gkslkit::cli {

/// Exit codes: 0 the property holds, 1 it was decided false, 2 input error.
inline constexpr int kHolds = 0;
inline constexpr int kFalse = 1;
inline constexpr int kInputError = 2;

/// Runs one command. args excludes the program name. The verdict report goes
/// to out (and to --json-out when given), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkslkit::cli
