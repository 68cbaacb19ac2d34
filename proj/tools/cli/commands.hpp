#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace bergman::cli {

/// Command-line overrides shared by all subcommands.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_levels;
  std::optional<std::string> mode;
};

struct Artifact {
  std::string name;
  std::string content;
};

struct CommandResult {
  OrderedJson config;  // resolved configuration, defaults filled in
  OrderedJson result;
  std::vector<Artifact> artifacts;
  int exit_code = 0;
};

/// Exit codes: completed, completed with a negative verdict, error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

CommandResult run_geom(const Node& config, const Overrides& o);
CommandResult run_lattice(const Node& config, const Overrides& o);
CommandResult run_condexp(const Node& config, const Overrides& o);
CommandResult run_psi(const Node& config, const Overrides& o);
CommandResult run_carleson_check(const Node& config, const Overrides& o);
CommandResult run_opnorm(const Node& config, const Overrides& o);
CommandResult run_mult_criterion(const Node& config, const Overrides& o);
/// `base_dir` resolves the relative expectations path of the suite config.
CommandResult run_suite(const Node& config, const Overrides& o, const std::string& base_dir);

/// Runs the named command ("carleson" meaning `carleson check`).
CommandResult run_command(const std::string& name, const Node& config, const Overrides& o,
                          const std::string& base_dir);

/// Full report document: tool, command, config echo, result.
OrderedJson make_report(const std::string& command, const CommandResult& r);

}  // namespace bergman::cli
