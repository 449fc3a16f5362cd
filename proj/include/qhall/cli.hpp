#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qhall::cli {

const char* version();

/// Runs one subcommand. Data goes to files or `out`, diagnostics to `err`.
/// Returns 0 on success, 1 when the requested physical quantity does not
/// exist (closed gap, ambiguous label, ...) or a computation fails, and 2 on
/// usage errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Throws invalid_argument on a malformed line.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path);

}  // namespace qhall::cli
