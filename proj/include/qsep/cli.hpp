#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsep {

inline constexpr const char* kVersion = "0.1.0";

// Dispatches one command line (without the program name). Reports go to
// out, diagnostics to err. Returns 0 on success, 1 on a usage error and 2
// on a numerical failure.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qsep
