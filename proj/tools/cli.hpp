#pragma once

#include <iosfwd>

namespace rgc::cli {

// Runs one verb. Exit codes: 0 success, 1 runtime failure, 2 bad arguments
// or violated preconditions.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rgc::cli
