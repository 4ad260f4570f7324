#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace authz::cli {

enum class ExitCode : int {
  Success = 0,
  ConnectivityViolations = 1,
  ParseError = 2,
  PreconditionFailure = 3,
  InvariantBreach = 4,
};

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or to the -o file), diagnostics to `err`.
ExitCode run(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace authz::cli
