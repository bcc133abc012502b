#pragma once

#include <ostream>

namespace vetrank::cli {

/// Runs one subcommand. Returns 0 on success, 1 on data or validation errors
/// and 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vetrank::cli
