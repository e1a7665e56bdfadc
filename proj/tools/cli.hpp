#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fextq::cli {

//! Runs the fextq command line. Results go to `out` (or to --output files),
//! warnings and the single-line JSON error record to `err`.
//! Returns 0 on success, 1 on a failed computation, 2 on invalid usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fextq::cli
