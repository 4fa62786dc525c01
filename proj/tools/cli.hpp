#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace failover::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;            // verdict true, Found, Delivered
inline constexpr int kExitNegative = 1;      // counterexample, Unsat, Loop/Dead
inline constexpr int kExitUsage = 2;         // usage, document or limit error
inline constexpr int kExitInconclusive = 3;  // budget exhausted

// Runs one invocation; args excludes the program name. "-" as a path means in/out.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace failover::cli
