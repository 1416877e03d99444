#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swapschur::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kConfigError = 2;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out or SWAPSCHUR_OUTPUT_DIR redirects them; diagnostics go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swapschur::cli
