#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xlap::cli {

enum ExitCode : int {
  kOk = 0,
  /// Some sentence hard-failed, gold dangles, or validation found problems.
  kDataFailure = 1,
  /// Bad flags, bad config, unreadable files, missing credentials.
  kConfigError = 2,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace xlap::cli
