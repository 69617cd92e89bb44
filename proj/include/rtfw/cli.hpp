#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtfw::cli {

/// Runs one CLI invocation. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 validation error, 2 numeric failure.
/// Errors are reported as one-line JSON documents on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtfw::cli
