#ifndef FIMSTAB_CLI_HPP
#define FIMSTAB_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fimstab::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kBadArguments = 2,
    kIoError = 3,
    kNoSignChange = 4,
    kInfeasible = 5,
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

/// out.csv -> out.manifest.json (any other extension is replaced the same way).
std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

/// Runs the command line `args` (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fimstab::cli

#endif  // FIMSTAB_CLI_HPP
