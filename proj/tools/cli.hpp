#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace boardsplit::cli {

/// Exit codes: 0 success, 1 runtime or check failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boardsplit::cli
