#include "app.hpp"

#include <filesystem>
#include <fstream>
#include <optional>

#include <bergman/errors.hpp>
#include <bergman/parallel.hpp>

#include "CLI11.hpp"
#include "commands.hpp"

#ifndef BERGMAN_DATA_DIR
#define BERGMAN_DATA_DIR "data"
#endif

namespace bergman::cli {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for weighted Bergman spaces and Carleson measures", "bergman"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_levels;
  std::optional<std::string> mode;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "Directory for report.json and CSV/JSON artifacts");
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--seed", seed, "Seed of the random test family");
  app.add_option("--grid-levels", grid_levels, "Finest grid level J (overrides grid.max_level)")
      ->check(CLI::Range(1, 40));
  app.add_option("--mode", mode, "unconditional | symmetrized")
      ->check(CLI::IsMember({"unconditional", "symmetrized"}));
  app.fallthrough();

  std::string command;
  for (const char* name : {"geom", "lattice", "condexp", "psi", "opnorm", "mult-criterion", "suite"}) {
    app.add_subcommand(name)->fallthrough()->callback([&command, name] { command = name; });
  }
  app.get_subcommand("geom")->description("Moebius maps, metrics, Bergman disks and kernels at a pair of points");
  app.get_subcommand("lattice")->description("Build and certify a truncated hyperbolic lattice; exports lattice.json");
  app.get_subcommand("condexp")->description("Level sets and conditional expectations of a polynomial");
  app.get_subcommand("psi")->description("Psi transform on a polar grid; exports psi_heatmap.csv");
  app.get_subcommand("psi")->add_subcommand("heatmap", "Same as psi")->fallthrough();
  app.get_subcommand("opnorm")->description("Norm estimate and boundedness criterion of u E");
  app.get_subcommand("mult-criterion")->description("Boundedness criterion of a multiplication operator");
  app.get_subcommand("suite")->description("Bundled regression suite against committed expectations");
  auto* carleson = app.add_subcommand("carleson", "Carleson-measure certification")->fallthrough();
  carleson->require_subcommand(1);
  carleson->add_subcommand("check", "Compute C1, C2, C3 and a verdict")->fallthrough()->callback([&command] {
    command = "carleson";
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  const std::string report_name = command == "carleson" ? "carleson check" : command;
  CommandResult result;
  Json config = Json::object();
  try {
    if (threads > 0) set_thread_count(threads);
    if (config_path.empty() && command == "suite") config_path = std::string(BERGMAN_DATA_DIR) + "/suite.json";
    std::string base_dir = ".";
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      try {
        config = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      base_dir = fs::path(config_path).parent_path().string();
      if (base_dir.empty()) base_dir = ".";
    }
    result = run_command(command, Node(config, ""), Overrides{seed, grid_levels, mode}, base_dir);
  } catch (const std::exception& e) {
    err << "bergman: " << e.what() << '\n';
    result.exit_code = kExitError;
    result.config = OrderedJson::parse(config.dump());
    result.result = OrderedJson::object();
    result.result["error"] = e.what();
  }

  const std::string report = make_report(report_name, result).dump(2) + "\n";
  out << report;
  if (!out_dir.empty()) {
    try {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "report.json", report);
      for (const auto& a : result.artifacts) write_file(fs::path(out_dir) / a.name, a.content);
    } catch (const std::exception& e) {
      err << "bergman: " << e.what() << '\n';
      return kExitError;
    }
  }
  return result.exit_code;
}

}  // namespace bergman::cli
