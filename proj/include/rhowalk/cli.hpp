#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rhowalk::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kUsage = 2,
    kExhausted = 3,
};

// Runs one command line (without the program name). Records go to `out`
// unless `-o` redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rhowalk::cli
