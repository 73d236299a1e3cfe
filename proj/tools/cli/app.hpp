#pragma once

#include <iosfwd>

namespace trackscore::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,  ///< an optimiser exhausted its budget; the value is still written
};

/// Entry point of the `trackscore` tool with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trackscore::cli
