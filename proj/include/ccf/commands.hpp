#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ccf/config.hpp"

namespace ccf::cli {

// Each command computes everything in memory first, then publishes one
// content-addressed directory. Return values are ExitCode values.

int cmd_gen(const ExperimentConfig& cfg, std::ostream& log);
/// Exit 0 iff beta_-(dim_E) - tau <= dim_G <= beta_+(dim_E) + tau.
int cmd_dims(const ExperimentConfig& cfg, std::ostream& log);
/// Exit 0 iff, in every radius group, the bound holds for at least `quantile` of the points.
int cmd_excise(const ExperimentConfig& cfg, std::ostream& log);
int cmd_density(const ExperimentConfig& cfg, std::ostream& log);
int cmd_calibrate(const ExperimentConfig& cfg, std::ostream& log);
/// Structural checks on the generated object.
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

/// Writes the bundled fixture CSVs straight into `dir` (not content-addressed).
int cmd_fixtures(const std::filesystem::path& dir, std::ostream& log);

/// Runs `command` and maps exceptions to exit codes: InputError and
/// ConstructionError to 2, ResourceError to 3, anything else to 1.
int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log,
                std::ostream& err);

}  // namespace ccf::cli
