// End-to-end acceptance gate. Each test case prints a single PASS/FAIL
// line for its criterion; the assertions carry the details.

#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggne/config.hpp"
#include "aggne/diagnostics.hpp"
#include "aggne/experiment.hpp"
#include "aggne/oracle.hpp"
#include "aggne/quadratic_game.hpp"
#include "aggne/solver.hpp"
#include "support.hpp"

using aggne::MixingMatrix;
using aggne::QuadraticAggregativeGame;
using aggne::SolverState;
using aggne::StepSchedule;
namespace at = aggne::test;
namespace fs = std::filesystem;

namespace {

bool report(int criterion, const char* name, bool ok) {
	std::printf("criterion %d (%s): %s\n", criterion, name,
	            ok ? "PASS" : "FAIL");
	std::fflush(stdout);
	return ok;
}

Eigen::VectorXd block_mean(const Eigen::VectorXd& z, int n, int m) {
	Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
	for (int i = 0; i < n; ++i) mean += z.segment(i * m, m);
	return mean / n;
}

MixingMatrix paper_graph() {
	return aggne::build_metropolis(
	    aggne::random_connected_topology(5, 0.5, 42));
}

fs::path temp_dir() {
	static const fs::path dir = [] {
		fs::path d = fs::temp_directory_path() / "aggne_acceptance";
		fs::create_directories(d);
		return d;
	}();
	return dir;
}

std::string slurp(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	REQUIRE(in.good());
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace

TEST_CASE("1: trackers average exactly") {
	std::mt19937_64 rng(424242);
	double worst = 0.0;
	for (int trial = 0; trial < 20; ++trial) {
		const int n = 2 + static_cast<int>(rng() % 9);  // N <= 10
		const int m = 1 + static_cast<int>(rng() % 4);  // m <= 4
		QuadraticAggregativeGame game = at::random_quadratic_game(n, m, rng);
		MixingMatrix w = at::random_mixing(n, 1000 + trial);
		SolverState st =
		    aggne::init_state(game, at::random_vector(n * m, 1.0, rng));
		StepSchedule s{0.02, 0.5, 0.05, 0.4};
		Eigen::VectorXd g2(m), g2_mean(m);
		for (int k = 0; k < 1000; ++k) {
			aggne::step(st, game, w, s);
			const Eigen::VectorXd dv =
			    block_mean(st.v, n, m) - block_mean(st.x, n, m);
			g2_mean.setZero();
			for (int i = 0; i < n; ++i) {
				game.grad2_g(i,
				             {st.x.data() + i * m, static_cast<std::size_t>(m)},
				             {st.v.data() + i * m, static_cast<std::size_t>(m)},
				             {g2.data(), static_cast<std::size_t>(m)});
				g2_mean += g2;
			}
			const Eigen::VectorXd dy = block_mean(st.y, n, m) - g2_mean / n;
			worst = std::max({worst, dv.cwiseAbs().maxCoeff(),
			                  dy.cwiseAbs().maxCoeff()});
		}
	}
	CHECK(report(1, "tracker means equal network averages", worst <= 1e-10));
	CHECK(worst <= 1e-10);
}

TEST_CASE("2: single player equals the centralized update") {
	std::mt19937_64 rng(7);
	QuadraticAggregativeGame game = at::random_quadratic_game(1, 3, rng);
	MixingMatrix w(Eigen::MatrixXd::Ones(1, 1));
	StepSchedule s{0.05, 0.5, 0.1, 0.4};
	Eigen::VectorXd x_ref = at::random_vector(3, 1.0, rng);
	SolverState st = aggne::init_state(game, x_ref);
	double worst = 0.0;
	for (long k = 0; k < 10000; ++k) {
		aggne::step(st, game, w, s);
		x_ref -= s.gamma(k) * (aggne::pseudo_gradient(game, x_ref) +
		                       s.eta(k) * aggne::social_gradient(game, x_ref));
		worst = std::max(worst, (st.x - x_ref).cwiseAbs().maxCoeff());
	}
	CHECK(report(2, "centralized reduction at N=1", worst <= 1e-12));
	CHECK(worst <= 1e-12);
}

TEST_CASE("3: convergence to the socially optimal equilibrium") {
	QuadraticAggregativeGame game = aggne::ev_paper_instance();
	MixingMatrix w = paper_graph();
	StepSchedule s = StepSchedule::paper();
	auto ne = aggne::solve_optimal_ne_qp(game);
	const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(15);

	aggne::RunOptions options;
	options.max_iters = 1000000;
	options.record_every = 1000;
	options.x_star = &ne.x;
	aggne::Trace trace = aggne::run(game, w, s, x0, options);

	const double gap0 = (x0 - ne.x).norm();
	const double rel_gap = *trace.rows.back().gap_to_xstar / gap0;
	aggne::ConvergenceSummary summary = aggne::summarize_convergence(trace);
	const bool slopes_negative = summary.slopes_defined &&
	                             summary.slope_log_ne_residual < 0.0 &&
	                             summary.slope_log_relative_gap < 0.0;
	std::printf("  final relative gap %.6f (tolerance 1e-2), "
	            "log-slopes %.3e / %.3e\n",
	            rel_gap, summary.slope_log_ne_residual,
	            summary.slope_log_relative_gap);
	const bool ok = rel_gap <= 1e-2 && slopes_negative;
	CHECK(report(3, "relative gap <= 1e-2 within 1e6 iterations", ok));
	CHECK(slopes_negative);
	CHECK(rel_gap <= 1e-2);
}

TEST_CASE("4: oracle cross-validation") {
	QuadraticAggregativeGame game = aggne::ev_paper_instance();
	aggne::GameConstants constants = aggne::estimate_constants(game);
	bool ok = true;
	for (double eta : {1.0, 0.1, 0.01}) {
		auto direct = aggne::solve_regularized_vi_direct(game, eta);
		auto fp = aggne::solve_regularized_vi_fixed_point(game, constants, eta,
		                                                  1e-10, 10000000);
		const double diff = (direct.x - fp.x).norm();
		CHECK(diff <= 1e-8);
		ok = ok && diff <= 1e-8;
	}
	auto ne = aggne::solve_optimal_ne_qp(game);
	const double feas = (game.stacked_f() * ne.x - game.stacked_d()).norm();
	const double stat = (game.stacked_u() * ne.x + game.stacked_b() +
	                     game.stacked_f().transpose() * ne.multipliers)
	                        .norm();
	CHECK(feas <= 1e-9);
	CHECK(stat <= 1e-9);
	ok = ok && feas <= 1e-9 && stat <= 1e-9;
	CHECK(report(4, "regularized and KKT oracles agree", ok));
}

TEST_CASE("5: regularization path is monotone with bounded drift") {
	QuadraticAggregativeGame game = aggne::ev_paper_instance();
	StepSchedule s = StepSchedule::paper();
	aggne::GameConstants constants = aggne::estimate_constants(game);
	auto ne = aggne::solve_optimal_ne_qp(game);

	const std::vector<long> ks{10, 100, 1000, 10000};
	auto traj = aggne::tikhonov_trajectory(game, s, ks);
	bool ok = true;
	double prev = (traj.points.front().x - ne.x).norm();
	for (std::size_t i = 1; i < traj.points.size(); ++i) {
		const double cur = (traj.points[i].x - ne.x).norm();
		CHECK(cur <= prev + 1e-10);
		ok = ok && cur <= prev + 1e-10;
		prev = cur;
	}
	for (long k : ks) {
		auto pair = aggne::tikhonov_trajectory(game, s, {k - 1, k});
		const double c_const =
		    std::max(aggne::social_gradient(game, pair.points[0].x).norm(),
		             aggne::social_gradient(game, pair.points[1].x).norm());
		const double bound = (c_const / constants.mu_g) * s.gamma_cap(k) + 1e-8;
		CHECK(pair.drifts[0] <= bound);
		ok = ok && pair.drifts[0] <= bound;
	}
	CHECK(report(5, "trajectory approaches the optimum monotonically", ok));
}

namespace {

// Shared setup for criteria 6 and 7: a safe-step run over k = 0..201 on
// the builtin instance, audited over k in [1, 200].
struct AuditedRun {
	QuadraticAggregativeGame game = aggne::ev_paper_instance();
	MixingMatrix w = paper_graph();
	aggne::GameConstants constants = aggne::estimate_constants(game);
	StepSchedule schedule;
	std::vector<SolverState> states;
	aggne::WindowAudit audit;

	AuditedRun() {
		aggne::SafeBound bound = aggne::gamma0_safe_bound(
		    constants, 0.1, w.rho(), w.norm_w_minus_i());
		schedule = {0.9 * bound.gamma0_max, 0.5, 0.1, 0.4};
		aggne::RunOptions options;
		options.max_iters = 201;
		options.dense_window_end = 200;
		options.state_log = &states;
		aggne::run(game, w, schedule, Eigen::VectorXd::Zero(15), options);
		audit = aggne::audit_window(game, w, schedule, constants, states, 200);
	}
};

const AuditedRun& audited_run() {
	static const AuditedRun run;
	return run;
}

} // namespace

TEST_CASE("6: per-step recursion holds with honest constants") {
	const AuditedRun& run = audited_run();
	CHECK(run.audit.recursion.passed);
	CHECK(run.audit.recursion.checked == 600);

	aggne::GameConstants corrupted = run.constants;
	corrupted.l_f *= 0.5;
	aggne::WindowAudit bad = aggne::audit_window(
	    run.game, run.w, run.schedule, corrupted, run.states, 200);
	CHECK(bad.recursion.violations.size() >= 1);
	std::printf("  honest min margin %.6g, halved-l_f min margin %.6g "
	            "(%zu violations)\n",
	            run.audit.recursion.min_margin, bad.recursion.min_margin,
	            bad.recursion.violations.size());

	const bool ok =
	    run.audit.recursion.passed && !bad.recursion.violations.empty();
	CHECK(report(6, "error recursion audit plus negative control", ok));
}

TEST_CASE("7: contraction and majorant audit") {
	const AuditedRun& run = audited_run();
	bool ok = run.audit.contraction.passed;
	CHECK(run.audit.contraction.passed);
	for (const aggne::RecursionData& r : run.audit.recs) {
		bool entrywise = true;
		for (int i = 0; i < 3; ++i)
			for (int j = 0; j < 3; ++j)
				entrywise = entrywise && r.h_matrix(i, j) <= r.h_hat(i, j) + 1e-12;
		const double h_cap = r.theta / std::numbers::sqrt3 * r.gamma_cap;
		for (int i = 0; i < 3; ++i)
			entrywise = entrywise && r.h_vector(i) <= h_cap + 1e-12;
		const bool spectral = aggne::spectral_radius_3x3(r.h_hat) < r.alpha;
		CHECK(entrywise);
		CHECK(spectral);
		ok = ok && entrywise && spectral;
	}
	CHECK(report(7, "spectral contraction and majorant domination", ok));
}

TEST_CASE("8: gradient callbacks match finite differences") {
	bool ok = true;
	auto run_check = [&](const aggne::AggregativeGame& game, std::uint64_t seed) {
		aggne::GradientCheckReport rep = aggne::check_gradients(game, 10, seed);
		CHECK(rep.passed);
		for (const auto& cb : rep.callbacks) CHECK(cb.max_rel_deviation <= 1e-5);
		ok = ok && rep.passed;
	};
	QuadraticAggregativeGame paper = aggne::ev_paper_instance();
	run_check(paper, 1);
	std::mt19937_64 rng(31337);
	for (int trial = 0; trial < 10; ++trial) {
		const int n = 1 + static_cast<int>(rng() % 6);
		const int m = 1 + static_cast<int>(rng() % 4);
		QuadraticAggregativeGame game = at::random_quadratic_game(n, m, rng);
		run_check(game, 100 + trial);
	}
	CHECK(report(8, "finite-difference gradient consistency", ok));
}

TEST_CASE("9: determinism and the exit-code contract") {
	bool ok = true;

	// Byte-identical traces for repeated runs of one config.
	const std::string base = R"({
	  "game": {"builtin": "ev_paper"},
	  "graph": {"random": {"n": 5, "edge_prob": 0.5, "seed": 42}},
	  "schedule": {"gamma0": 0.0002, "a": 0.5, "eta0": 0.1, "b": 0.4},
	  "max_iters": 500, "record_every": 50, "attach_oracle": true,
	  "output_path": "PATH"})";
	auto run_with_output = [&](const std::string& out) {
		std::string text = base;
		text.replace(text.find("PATH"), 4, out);
		aggne::ExperimentConfig cfg = aggne::parse_config(text);
		return aggne::run_experiment(cfg);
	};
	const std::string out_a = (temp_dir() / "det_a.csv").string();
	const std::string out_b = (temp_dir() / "det_b.csv").string();
	auto res_a = run_with_output(out_a);
	auto res_b = run_with_output(out_b);
	const bool identical = slurp(out_a) == slurp(out_b) &&
	                       res_a.code == aggne::ExitCode::success;
	CHECK(identical);
	ok = ok && identical;

	// Exit-code contract across the five outcome classes, via the CLI.
	auto cli = [&](const std::string& config_text, const std::string& name) {
		const fs::path cfg_path = temp_dir() / name;
		std::ofstream(cfg_path, std::ios::binary) << config_text;
		const std::string cmd = std::string(AGGNE_CLI_PATH) + " run --config " +
		                        cfg_path.string() + " >/dev/null 2>/dev/null";
		return WEXITSTATUS(std::system(cmd.c_str()));
	};
	const std::string out_c = (temp_dir() / "cli.csv").string();
	auto with = [&](const std::string& patch) {
		std::string text = base;
		text.replace(text.find("PATH"), 4, out_c);
		text.insert(text.rfind('}'), patch);
		return text;
	};
	const int code_ok = cli(with(""), "ok.json");
	const int code_validation =
	    cli(R"({"game": {"builtin": "ev_paper"}, "graph": "complete",
	            "schedule": "paper", "max_iters": 10})",
	        "validation.json"); // paper gamma0 exceeds the safe bound
	const int code_divergence = cli(
	    with(R"(, "allow_unsafe_gamma0": true)")
	        .replace(with("").find("0.0002"), 6, "1000.0"),
	    "divergence.json");
	const int code_audit = cli(
	    with(R"(, "diagnostics": {"enabled": true, "window_end": 60, "lf_scale": 0.02})"),
	    "audit.json");
	const int code_io =
	    cli(with(", \"output_path\": \"/nonexistent_dir_zz/t.csv\""), "io.json");
	CHECK(code_ok == 0);
	CHECK(code_validation == 2);
	CHECK(code_divergence == 3);
	CHECK(code_audit == 4);
	CHECK(code_io == 5);
	ok = ok && code_ok == 0 && code_validation == 2 && code_divergence == 3 &&
	     code_audit == 4 && code_io == 5;
	CHECK(report(9, "byte-identical traces and exit codes", ok));
}
