#include "aggne/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "aggne/errors.hpp"
#include "aggne/kernels.hpp"
#include "aggne/log.hpp"
#include "aggne/oracle.hpp"
#include "aggne/topology.hpp"

namespace aggne {
namespace {

QuadraticAggregativeGame build_game(const GameSpec& spec) {
	if (std::holds_alternative<BuiltinGameSpec>(spec)) return ev_paper_instance();
	const auto& q = std::get<QuadraticGameSpec>(spec);
	return ev_game(q.n, q.m, q.d, q.c1, q.b1, q.u, q.c2, q.b2);
}

Topology build_topology(const GraphSpec& spec, int n_players) {
	if (std::holds_alternative<CompleteGraphSpec>(spec))
		return complete_topology(n_players);
	if (const auto* el = std::get_if<EdgeListGraphSpec>(&spec)) {
		if (el->n != n_players)
			throw ValidationError("graph node count does not match player count");
		return Topology(el->n, el->edges);
	}
	const auto& r = std::get<RandomGraphSpec>(spec);
	if (r.n != n_players)
		throw ValidationError("graph node count does not match player count");
	return random_connected_topology(r.n, r.edge_prob, r.seed);
}

} // namespace

ExperimentSetup build_setup(const ExperimentConfig& config) {
	QuadraticAggregativeGame game = build_game(config.game);
	const auto [n, m] = game.dims();

	MixingMatrix mixing = n == 1
	                          ? MixingMatrix(Eigen::MatrixXd::Ones(1, 1))
	                          : build_metropolis(build_topology(config.graph, n));
	GameConstants constants = estimate_constants(game);
	SafeBound bound = gamma0_safe_bound(constants, config.schedule.eta0,
	                                    mixing.rho(), mixing.norm_w_minus_i());

	if (config.schedule.gamma0 > bound.gamma0_max) {
		if (!config.allow_unsafe_gamma0) {
			std::ostringstream msg;
			msg << "gamma0 = " << config.schedule.gamma0
			    << " exceeds the convergence-safe bound " << bound.gamma0_max
			    << "; set allow_unsafe_gamma0 to proceed";
			throw ValidationError(msg.str());
		}
		std::ostringstream msg;
		msg << "gamma0 = " << config.schedule.gamma0
		    << " exceeds the safe bound " << bound.gamma0_max
		    << " (override active)";
		log_info(msg.str());
	}

	Eigen::VectorXd x0;
	if (config.x0) {
		if (config.x0->size() != static_cast<Eigen::Index>(n) * m)
			throw ValidationError("x0 has wrong length for this game");
		x0 = *config.x0;
	} else {
		x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * m);
	}
	return {std::move(game), std::move(mixing), constants, bound, std::move(x0)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
	ExperimentSetup setup = build_setup(config);

	std::optional<OptimalNE> ne;
	if (config.attach_oracle) ne = solve_optimal_ne_qp(setup.game);

	RunOptions options;
	options.max_iters = config.max_iters;
	options.record_every = config.record_every;
	options.throw_on_divergence = false;
	if (ne) options.x_star = &ne->x;
	std::vector<SolverState> state_log;
	if (config.diagnostics.enabled) {
		options.dense_window_end = config.diagnostics.window_end;
		options.state_log = &state_log;
	}

	ExperimentResult result;
	result.trace = run(setup.game, setup.mixing, config.schedule, setup.x0,
	                   options);
	result.trace.config_hash = config_hash(config);
	{
		std::ostringstream note;
		note << "l_f=" << setup.constants.l_f << " l_1=" << setup.constants.l_1
		     << " l_2=" << setup.constants.l_2 << " mu_g=" << setup.constants.mu_g
		     << " rho=" << setup.mixing.rho()
		     << " gamma0_max=" << setup.safe_bound.gamma0_max;
		result.trace.constants_note = note.str();
	}

	if (result.trace.diverged) {
		result.code = ExitCode::divergence;
	} else if (config.diagnostics.enabled) {
		const long window_end =
		    std::min<long>(config.diagnostics.window_end, config.max_iters - 1);
		if (window_end >= 1) {
			GameConstants audited = setup.constants;
			audited.l_f *= config.diagnostics.lf_scale;
			result.audit = audit_window(setup.game, setup.mixing, config.schedule,
			                            audited, state_log, window_end);
			// Attach ||Delta_k|| to the trace rows inside the window.
			std::unordered_map<long, double> delta_by_k;
			for (const ErrorVector& d : result.audit->deltas)
				delta_by_k.emplace(d.k, d.norm());
			result.trace.has_delta = true;
			for (TraceRow& row : result.trace.rows) {
				auto it = delta_by_k.find(row.k);
				if (it != delta_by_k.end()) row.delta_norm = it->second;
			}
			const bool safe = config.schedule.gamma0 <= setup.safe_bound.gamma0_max;
			const bool recursion_ok = result.audit->recursion.passed;
			// The spectral/contraction audit is advisory for unsafe gamma0.
			const bool contraction_ok = !safe || result.audit->contraction.passed;
			if (!recursion_ok || !contraction_ok)
				result.code = ExitCode::diagnostics_violation;
		}
	}

	ConvergenceSummary summary = summarize_convergence(result.trace);

	std::ostringstream report;
	report << "config_hash: " << result.trace.config_hash << "\n";
	report << "kernels: " << kernels::active().name << "\n";
	report << "constants: " << result.trace.constants_note << "\n";
	report << "safe_bound: candidates=[" << setup.safe_bound.per_bound[0] << ", "
	       << setup.safe_bound.per_bound[1] << ", " << setup.safe_bound.per_bound[2]
	       << ", " << setup.safe_bound.per_bound[3] << "] gamma0_max="
	       << setup.safe_bound.gamma0_max << "\n";
	report << "schedule: gamma0=" << config.schedule.gamma0
	       << " a=" << config.schedule.a << " eta0=" << config.schedule.eta0
	       << " b=" << config.schedule.b << "\n";
	report << "summary: " << summary.describe() << "\n";
	if (ne) {
		report << "x_star: [";
		for (Eigen::Index i = 0; i < ne->x.size(); ++i) {
			if (i > 0) report << ", ";
			report << format_double(ne->x(i));
		}
		report << "]\n";
		report << "x_star_kkt_residual: " << ne->kkt_residual
		       << (ne->least_squares_fallback ? " (least-squares fallback)" : "")
		       << "\n";
	}
	if (result.audit) {
		report << "diagnostics_c: " << result.audit->c_const << "\n";
		report << "recursion_audit: " << result.audit->recursion.describe() << "\n";
		report << "contraction_audit: " << result.audit->contraction.describe()
		       << "\n";
	}
	report << "status: "
	       << (result.code == ExitCode::success
	               ? "ok"
	               : result.code == ExitCode::divergence
	                     ? "diverged"
	                     : "diagnostics violation")
	       << "\n";
	result.report = report.str();

	write_trace(result.trace, config.output_path);
	const std::string report_path = config.output_path + ".report.txt";
	{
		std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
		if (!out) throw IoError("cannot open " + report_path);
		out << result.report;
		if (!out) throw IoError("write failed for " + report_path);
	}
	log_info("trace written to " + config.output_path);
	return result;
}

} // namespace aggne
