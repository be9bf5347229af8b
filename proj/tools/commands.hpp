#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ceilfit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. `args` excludes the program name. A run path of "-"
// reads from `in`. Machine output goes to --out or `out`; the human summary
// goes to `out` when --out is set and to `err` otherwise.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace ceilfit::cli
