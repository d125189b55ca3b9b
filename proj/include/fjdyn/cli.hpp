#pragma once

#include <iosfwd>

namespace fjdyn {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitDisagreement = 3;

/// Subcommands analyze, simulate, sequence, bounded and verify. Diagnostics go to
/// `err`; reports go to `out` unless --report names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fjdyn
