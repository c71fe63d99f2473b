#ifndef ENTROFUSE_CLI_COMMANDS_HPP
#define ENTROFUSE_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace entrofuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitRejected = 2;

/// Runs the command line (args excludes the program name) and returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entrofuse::cli

#endif  // ENTROFUSE_CLI_COMMANDS_HPP
