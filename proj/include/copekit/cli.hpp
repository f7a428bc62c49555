#pragma once

#include <iosfwd>

namespace copekit {

/// Exit codes of the command-line tool.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;  // verify mismatch, or no factorization found
inline constexpr int usage = 2;   // bad arguments, unreadable or invalid input
inline constexpr int guard = 3;   // computation guard exceeded
inline constexpr int contextual = 10;
inline constexpr int undetermined = 20;
}  // namespace exit_code

/// Runs one invocation. Documents go to out, diagnostics to err; input is
/// read from the positional path or from in when none is given.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace copekit
