#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nulleq::report {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,    ///< bad flags or arguments
  kExitData = 3,     ///< unreadable or unusable input (DataError, IoError)
  kExitNumeric = 4,  ///< DomainError, NumericError and its subclasses
};

/// Runs one command line (without the program name) and returns the exit
/// code. The report goes to `out`; warnings and errors go to `err`.
/// NULLEQ_SEED, when set, is the default for --seed.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nulleq::report
