#pragma once

#include <iosfwd>

namespace spinmoment::cli {

/// Entry point behind the `spinmoment` executable; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinmoment::cli
