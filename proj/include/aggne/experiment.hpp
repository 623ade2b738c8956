#pragma once

#include <optional>
#include <string>

#include "aggne/config.hpp"
#include "aggne/diagnostics.hpp"
#include "aggne/mixing.hpp"
#include "aggne/quadratic_game.hpp"
#include "aggne/trace.hpp"

namespace aggne {

// Process exit codes shared by the library runner and the CLI.
enum class ExitCode : int {
	success = 0,
	validation = 2,
	divergence = 3,
	diagnostics_violation = 4,
	io = 5,
};

struct ExperimentResult {
	ExitCode code = ExitCode::success;
	Trace trace;
	std::string report;
	std::optional<WindowAudit> audit;
};

// Materialized experiment objects, also used by the `oracle` subcommand.
struct ExperimentSetup {
	QuadraticAggregativeGame game;
	MixingMatrix mixing;
	GameConstants constants;
	SafeBound safe_bound;
	Eigen::VectorXd x0;
};

ExperimentSetup build_setup(const ExperimentConfig& config);

// Runs the experiment end to end and writes the trace CSV plus a
// structured-text report next to it (<output>.report.txt). Divergence and
// diagnostics violations are reported through the exit code; validation
// and I/O problems throw (ValidationError / IoError).
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace aggne
