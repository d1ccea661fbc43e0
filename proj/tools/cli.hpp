#pragma once

#include <iosfwd>

namespace wsdf::cli {

// Process exit codes, one per error class.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInvalidArgument = 4,
  kExitDomain = 5,
  kExitNumeric = 6,
};

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Errors are reported on `err` as a single line
//   wsdf: error[<category>]: <message>
// and mapped to the exit codes above.
int run_subcommand(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsdf::cli
