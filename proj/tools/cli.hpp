#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace absa::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kDataError = 3,
  kCheckpointError = 4,
};

/// Entry point of `absa-gcn`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace absa::cli
