#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xorwl {

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2, kExitCapacity = 3 };

/// Entry point shared by the binary and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xorwl
