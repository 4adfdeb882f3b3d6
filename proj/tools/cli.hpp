#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace screwkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args excludes the program name. Artifacts are
/// written under --out only after the command has fully succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

}  // namespace screwkit::cli
