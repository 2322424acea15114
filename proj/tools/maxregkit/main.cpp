#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "maxregkit/errors.hpp"
#include "maxregkit_app/config.hpp"
#include "maxregkit_app/driver.hpp"
#include "maxregkit_app/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "JSON configuration file")->required();
  cmd->add_option("--out", opt.out, "report destination (default: config output.path, else stdout)");
  cmd->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opt.seed, "override every seed in the configuration");
  cmd->add_flag("--quiet", opt.quiet, "no progress or summary on stderr");
}

int execute(const std::string& command, const Options& opt) {
  using namespace maxregkit;
  app::RunConfig config;
  try {
    config = app::load_config(opt.config);
  } catch (const app::ConfigError& e) {
    std::cerr << "maxregkit: " << e.what() << '\n';
    return kExitConfig;
  }
  if (opt.seed) app::override_seed(config, *opt.seed);
  if (!opt.format.empty()) config.format = opt.format;
  if (!opt.out.empty()) config.output_path = opt.out;
  if (!opt.quiet) app::set_progress_sink([](const std::string& line) { std::cerr << "  " << line << '\n'; });

  app::Report report;
  try {
    if (command == "run") {
      report = app::run(config);
    } else if (command == "sweep") {
      report = app::sweep(config);
    } else {
      report = app::bench(config);
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "maxregkit: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "maxregkit: validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "maxregkit: numerical error: " << e.what() << '\n';
    return kExitValidation;
  }

  const std::string text = config.format == "csv" ? app::to_csv(report) : app::to_json(report);
  if (config.output_path) {
    std::ofstream out(*config.output_path);
    if (!out) {
      std::cerr << "maxregkit: cannot write '" << config.output_path->string() << "'\n";
      return kExitConfig;
    }
    out << text;
  } else {
    std::cout << text;
  }

  const int code = report.exit_code();
  if (!opt.quiet) {
    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += r.pass ? 0 : 1;
    std::cerr << "maxregkit " << command << ": " << report.rows.size() << " rows, " << failed
              << " failed, exit " << code << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"maximal regularity operator toolkit"};
  cli.require_subcommand(1);
  Options opt;
  auto* run = cli.add_subcommand("run", "run the configured experiments once");
  auto* sweep = cli.add_subcommand("sweep", "run over sweep.N and fit convergence orders");
  auto* bench = cli.add_subcommand("bench", "time direct against fourier paths");
  for (auto* cmd : {run, sweep, bench}) add_common(cmd, opt);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = run->parsed() ? "run" : sweep->parsed() ? "sweep" : "bench";
  return execute(command, opt);
}
