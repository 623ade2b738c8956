// Experiment runner for distributed optimal-NE seeking in aggregative games.
//
//   aggne run      --config PATH [--out PATH]
//   aggne validate --config PATH
//   aggne oracle   --config PATH
//
// Exit codes: 0 success, 2 validation failure, 3 divergence,
// 4 diagnostics violation, 5 I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "aggne/errors.hpp"
#include "aggne/experiment.hpp"
#include "aggne/oracle.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_override) {
	aggne::ExperimentConfig config = aggne::load_config(config_path);
	if (!out_override.empty()) config.output_path = out_override;
	aggne::ExperimentResult result = aggne::run_experiment(config);
	std::cout << result.report;
	return static_cast<int>(result.code);
}

int validate_command(const std::string& config_path) {
	aggne::ExperimentConfig config = aggne::load_config(config_path);
	aggne::build_setup(config); // full object construction + bound check
	std::cout << "config ok (hash " << aggne::config_hash(config) << ")\n";
	return 0;
}

int oracle_command(const std::string& config_path) {
	aggne::ExperimentConfig config = aggne::load_config(config_path);
	aggne::ExperimentSetup setup = aggne::build_setup(config);
	aggne::OptimalNE ne = aggne::solve_optimal_ne_qp(setup.game);

	std::cout << "constants: l_f=" << setup.constants.l_f
	          << " l_1=" << setup.constants.l_1 << " l_2=" << setup.constants.l_2
	          << " mu_g=" << setup.constants.mu_g << "\n";
	std::cout << "graph: rho=" << setup.mixing.rho()
	          << " norm_w_minus_i=" << setup.mixing.norm_w_minus_i() << "\n";
	std::cout << "gamma0_max: " << setup.safe_bound.gamma0_max << " (candidates "
	          << setup.safe_bound.per_bound[0] << ", "
	          << setup.safe_bound.per_bound[1] << ", "
	          << setup.safe_bound.per_bound[2] << ", "
	          << setup.safe_bound.per_bound[3] << ")\n";
	std::cout << "x_star: [";
	for (Eigen::Index i = 0; i < ne.x.size(); ++i) {
		if (i > 0) std::cout << ", ";
		std::cout << aggne::format_double(ne.x(i));
	}
	std::cout << "]\n";
	std::cout << "kkt_residual: " << ne.kkt_residual
	          << (ne.least_squares_fallback ? " (least-squares fallback)" : "")
	          << "\n";
	std::cout << "ne_residual_at_x_star: "
	          << aggne::ne_residual(setup.game, ne.x) << "\n";
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"distributed optimal Nash equilibrium seeking simulator"};
	app.require_subcommand(1);

	std::string config_path;
	std::string out_override;

	CLI::App* run = app.add_subcommand("run", "run an experiment from a config");
	run->add_option("--config", config_path, "config file path")->required();
	run->add_option("--out", out_override, "override the trace output path");

	CLI::App* validate =
	    app.add_subcommand("validate", "parse and validate a config");
	validate->add_option("--config", config_path, "config file path")->required();

	CLI::App* oracle = app.add_subcommand(
	    "oracle", "print reference solution, constants and safe step bound");
	oracle->add_option("--config", config_path, "config file path")->required();

	CLI11_PARSE(app, argc, argv);

	try {
		if (run->parsed()) return run_command(config_path, out_override);
		if (validate->parsed()) return validate_command(config_path);
		return oracle_command(config_path);
	} catch (const aggne::ParseError& e) {
		std::fprintf(stderr, "parse error: %s\n", e.what());
		return static_cast<int>(aggne::ExitCode::validation);
	} catch (const aggne::ValidationError& e) {
		std::fprintf(stderr, "validation error: %s\n", e.what());
		return static_cast<int>(aggne::ExitCode::validation);
	} catch (const aggne::NonFiniteValue& e) {
		std::fprintf(stderr, "divergence: %s\n", e.what());
		return static_cast<int>(aggne::ExitCode::divergence);
	} catch (const aggne::IoError& e) {
		std::fprintf(stderr, "i/o error: %s\n", e.what());
		return static_cast<int>(aggne::ExitCode::io);
	} catch (const aggne::Error& e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 1;
	}
}
