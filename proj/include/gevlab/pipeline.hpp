#pragma once

#include <string>

#include <json.hpp>

#include "gevlab/config.hpp"

namespace gevlab {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFinding = 1,     // the run completed but a checked property failed
    kExitParse = 2,
    kExitAssumption = 3,
    kExitNumerical = 4,   // NONCONVERGENT, DOMAIN, TRUNCATION and other library errors
};

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json summary;
};

// Every command writes its artifacts into out_dir (created if missing) and returns a summary.
// All commands except `check` stop with kExitAssumption when the assumption gate fails.
CommandResult run_check(const RunConfig& cfg, const std::string& out_dir);
CommandResult run_coeffs(const RunConfig& cfg, const std::string& out_dir);
CommandResult run_solve(const RunConfig& cfg, const std::string& out_dir);
CommandResult run_fit(const RunConfig& cfg, const std::string& out_dir);
CommandResult run_campaign(const RunConfig& cfg, const std::string& out_dir);

CommandResult run_command(const std::string& command, const RunConfig& cfg,
                          const std::string& out_dir);

nlohmann::json to_json(const AssumptionReport& r);
nlohmann::json to_json(const GevreyFitReport& r);
nlohmann::json to_json(const CampaignReport& r);
nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const DominationReport& r);

// "%.17g" so that reruns compare byte for byte.
std::string format_double(double v);

}  // namespace gevlab
