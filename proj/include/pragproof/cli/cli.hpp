#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pragproof::cli {

enum ExitCode { kOk = 0, kDomainFailure = 1, kUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. Data goes to `out` (or the
/// files named by --out/--csv/--trace), diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Files named directly, plus the sorted `*.n3` files of named directories.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& paths);

}  // namespace pragproof::cli
