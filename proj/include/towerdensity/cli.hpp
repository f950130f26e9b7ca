#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace towerdensity::cli {

// Runs one CLI invocation (args excludes the program name).
// Exit codes: 0 success, 2 usage error, 3 capacity error, 4 internal
// invariant violation.  Errors go to err, data to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace towerdensity::cli
