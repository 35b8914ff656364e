#pragma once

#include <ostream>

namespace citerank::cli {

/// Runs the command line; returns the process exit status.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace citerank::cli
