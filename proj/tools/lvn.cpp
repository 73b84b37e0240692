// Command-line front end: lvn <subcommand> [--config path] [--seed n]
//                             [--out path] [--format human|structured]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lvn/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace lvn::app;

  CLI::App app{"Lueders / von Neumann measuring-device simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "structured";

  for (const char* name : {"solve-pointer", "simulate", "discriminate", "report-metrics"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config (defaults when omitted)");
    sub->add_option("--seed", seed, "overrides protocol.seed and baseline.seed");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "human or structured")
        ->check(CLI::IsMember({"human", "structured"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const lvn::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (seed) {
    config.protocol.seed = *seed;
    config.baseline.seed = *seed;
  }

  const CommandResult result = run_command(command, config);
  const std::string text =
      format == "human" ? render_human(result.report) : canonical_dump(result.report) + "\n";

  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return kConfigError;
    }
    out << text;
  }
  if (result.exit_code != kOk && result.report.contains("error"))
    std::cerr << result.report["error"]["message"].get<std::string>() << '\n';
  return result.exit_code;
}
