#pragma once

#include <iosfwd>

namespace shtlab {

/// Entry point behind the `shtlab` binary. Exit codes: 0 every asserted check
/// passed, 1 some check failed, 2 usage, validation, precondition or I/O error.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

}  // namespace shtlab
