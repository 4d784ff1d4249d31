#pragma once

#include <ostream>

namespace graphite::cli {

// Entry point for the `graphite` tool. Returns 0 on success, 1 on a runtime
// failure and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphite::cli
