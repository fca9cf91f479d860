#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace collatz::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,   // a checked property or identity fails
    kExitInvalidInput = 2,
    kExitCapExhausted = 3,
};

/// Runs one subcommand. `args` excludes the program name. Exactly one
/// envelope is written to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collatz::cli
