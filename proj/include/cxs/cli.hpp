#pragma once

// Command-line front end. Certificates are JSON on `out`; diagnostics go to `err`.
//
// Exit codes: 0 success (even / affirmative), 1 usage or input error,
// 2 numerical failure, 3 odd outcome.

#include <ostream>
#include <string>
#include <vector>

namespace cxs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitOdd = 3;

/// Environment variable overriding the default --tol.
inline constexpr const char* kTolEnv = "CXSTRUCT_TOL";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cxs::cli
