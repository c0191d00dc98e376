#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "isocm/errors.hpp"

namespace isocm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitChamberBoundary = 3,
  kExitRankUnstable = 4,
  kExitBracketAudit = 5,
  kExitPeriod = 6,
};

struct CommandResult {
  int exit_code = kExitOk;
  /// Report (or diagnostics on failure) as printed on stdout.
  nlohmann::json report;
};

/// Runs integrate and project_flow from the same start and writes integrated.csv,
/// projected.csv, comparison.csv and summary.json into `out`.
CommandResult cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out, int workers = 1);

/// Distances at T/4, T/2, 3T/4, T for each trial seed; writes period.json.
CommandResult cmd_verify_period(const ExperimentConfig& cfg, const std::filesystem::path& out, int workers = 1);

/// Pool saturation and rank of the invariants; writes rank.json.
CommandResult cmd_rank(const ExperimentConfig& cfg, const std::filesystem::path& out, int workers = 1);

/// Bracket and r-matrix residuals at seeded random points; writes bracket_audit.json.
CommandResult cmd_bracket_audit(const ExperimentConfig& cfg, const std::filesystem::path& out, int workers = 1);

/// Validates a raw configuration document (parameters included) and writes validation.json.
CommandResult cmd_validate(const nlohmann::json& doc, const std::filesystem::path& out);

/// Parses `doc` (after applying the seed override) and dispatches. Library errors are mapped
/// to exit codes and reported as JSON diagnostics, also written to out/error.json.
CommandResult run_command(const std::string& name, nlohmann::json doc, const std::filesystem::path& out,
                          std::optional<std::uint64_t> seed_override, int workers);

int exit_code_for(ErrorKind kind);
nlohmann::json diagnostics(const std::exception& e, int exit_code);

/// Worker count from ISOCM_WORKERS (default 1, clamped to [1, 64]).
int workers_from_env();

}  // namespace isocm::cli
