#pragma once

#include <string>

#include "lvn/app/config.hpp"

namespace lvn::app {

/// 0 success, 1 config error, 2 no pointer solution, 3 metric undefined.
enum ExitCode : int { kOk = 0, kConfigError = 1, kNoSolution = 2, kMetricUndefined = 3 };

struct CommandResult {
  int exit_code = kOk;
  Json report;
};

CommandResult cmd_solve_pointer(const ExperimentConfig& config);
CommandResult cmd_simulate(const ExperimentConfig& config);
CommandResult cmd_discriminate(const ExperimentConfig& config);
CommandResult cmd_report_metrics(const ExperimentConfig& config);

/// Dispatch by subcommand name ("solve-pointer", "simulate", "discriminate",
/// "report-metrics").
CommandResult run_command(const std::string& name, const ExperimentConfig& config);

/// Plain-text rendering of a report for terminals.
std::string render_human(const Json& report);

}  // namespace lvn::app
