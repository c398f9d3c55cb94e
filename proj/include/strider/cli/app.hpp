#pragma once
// Command-line front end: train, eval, analyze, replay.
//
// Exit codes: 0 success; 1 runtime failure (simulator fault); 2 usage,
// configuration or input errors (nothing is written); 3 incompatible
// checkpoint (bad magic, version or dimensions).

#include <iosfwd>
#include <string>
#include <vector>

namespace strider::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckpoint = 3;

// Run directories are created under $STRIDER_OUTPUT_ROOT/<output.dir>/
// (the current directory when the variable is unset).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strider::cli
