#pragma once

#include <iosfwd>

namespace epiq {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/**
 * The epiq command line. Reports go to `out` (or to --out), diagnostics to
 * `err`. A report is written only once it is complete.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace epiq
