#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steerlat::cli {

// Exit codes: 0 success, 1 computation error, 2 usage or capability error,
// 3 input-validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;

// Full command-line surface; args excludes argv[0].  Streams are injected
// so tests can run commands in-process.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace steerlat::cli
