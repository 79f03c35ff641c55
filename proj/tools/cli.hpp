#pragma once

#include <ostream>

namespace scalefit::cli {

/// Exit codes: 0 success, 1 computation failure, 2 usage or validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line with the given streams. Used by main() and by the
/// tests, which drive it in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scalefit::cli
