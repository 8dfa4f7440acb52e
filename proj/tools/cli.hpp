#pragma once

#include <iosfwd>

namespace sigrace::cli {

/// Entry point behind the `sigrace` binary; returns the process exit code.
/// Output goes to `out` unless --output names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sigrace::cli
