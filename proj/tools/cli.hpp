#ifndef INFERSCHED_TOOLS_CLI_HPP_
#define INFERSCHED_TOOLS_CLI_HPP_

namespace infersched {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;

// Entry point of the `infersched` tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace infersched

#endif  // INFERSCHED_TOOLS_CLI_HPP_
