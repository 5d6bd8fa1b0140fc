#pragma once

#include <ostream>
#include <string>

#include "toda/config.hpp"
#include "toda/verify.hpp"

namespace toda {

// Exit codes shared by the commands and the executable.
enum ExitCode { kExitOk = 0, kExitVerificationFailed = 1, kExitUsage = 2 };

// Each command writes its files under cfg.out, logs a human summary to `log`
// and returns an exit code. Configuration problems throw ConfigError.
int cmd_reps(const RunConfig& cfg, std::ostream& log);
int cmd_identities(const RunConfig& cfg, std::ostream& log);
int cmd_solve_verify(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);
int run_command(const RunConfig& cfg, std::ostream& log);

std::string report_json(const ConvergenceReport& r);
std::string summary_csv(const ConvergenceReport& r, double threshold);
std::string calibration_json(const std::vector<CalibrationFinding>& f);

} // namespace toda
