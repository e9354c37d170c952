#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwdisc {

inline constexpr const char* kVersion = "0.1.0";

// Batch front end. Subcommands: disc, min-disc, refine, verify, generate,
// campaign, svd. Returns the process exit code: 0 success, 2 input/config
// error, 3 budget exceeded, 4 verification failure. Reports that have no
// --output destination are written to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mwdisc
