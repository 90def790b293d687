#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adjprof {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFileNotFound = 2,
  kParseError = 3,
  kGuardExceeded = 4,
  kModelError = 5,
};

/// Entry point of the `adjprof` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adjprof
