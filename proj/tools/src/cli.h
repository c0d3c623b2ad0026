#pragma once

#include <ostream>

namespace cctm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

// Runs one command line. Reports go to `out` unless --out names a file;
// diagnostics go to `err`.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cctm::cli
