#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bergman::cli {

/// Parses arguments, runs the subcommand and writes the report to `out`
/// (and to --out DIR/report.json with any artifacts). Returns the exit code.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bergman::cli
