#pragma once
// The sdnn command-line tool, callable in-process for testing.

#include <iosfwd>
#include <string>
#include <vector>

namespace sdnn::cli {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kUsage = 2,
  kIoOrFormat = 3,
  kDimension = 4,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace sdnn::cli
