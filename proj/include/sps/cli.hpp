#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (arguments after the program name). Primary output
/// goes to --out or `out`; the JSON report (with the run manifest) goes to
/// --report or `err`. Returns 0 on success, 1 when a verification fails and
/// 2 on usage or input errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace sps::cli
