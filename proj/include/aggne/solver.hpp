#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "aggne/game.hpp"
#include "aggne/mixing.hpp"
#include "aggne/trace.hpp"

namespace aggne {

// Diminishing step sizes gamma_k = gamma0/(k+1)^a, eta_k = eta0/(k+1)^b
// with 0 < b < a < 1 and a + b < 1.
struct StepSchedule {
	double gamma0;
	double a;
	double eta0;
	double b;

	double gamma(long k) const { return gamma0 / std::pow(k + 1.0, a); }
	double eta(long k) const { return eta0 / std::pow(k + 1.0, b); }
	// Gamma_{k-1} = |1 - eta_{k-1}/eta_k| = (1 + 1/k)^b - 1, k >= 1.
	double gamma_cap(long k) const { return std::pow(1.0 + 1.0 / k, b) - 1.0; }

	// Throws ValidationError unless the exponent rules hold.
	void validate() const;

	static StepSchedule paper() { return {0.1, 0.5, 0.1, 0.4}; }
};

// Per-agent triples stacked agent-major: x, v (aggregate tracker), y
// (social-gradient tracker), each of length N*m. g2_cache carries
// grad2_g(i, x_i, v_i) from the previous round so each step evaluates it
// once per agent.
struct SolverState {
	long k = 0;
	Eigen::VectorXd x, v, y;
	Eigen::VectorXd g2_cache;
};

SolverState init_state(const AggregativeGame& game, const Eigen::VectorXd& x0);

// One synchronous round of the distributed update (decision step with the
// regularized incentive term, then gossip for both trackers). Throws
// NonFiniteValue if the update produces NaN/Inf.
void step(SolverState& state, const AggregativeGame& game,
          const MixingMatrix& w, const StepSchedule& schedule);

// Upper bounds on gamma0 from the convergence theorem; all four candidate
// bounds must hold simultaneously, so the usable bound is their minimum.
struct SafeBound {
	double c1, c2, c3;
	std::array<double, 4> per_bound;
	double gamma0_max;
};

SafeBound gamma0_safe_bound(const GameConstants& constants, double eta0,
                            double rho, double norm_w_minus_i);

struct RunOptions {
	long max_iters = 1000;
	long record_every = 100;
	// When set, trace rows include ||x^k - x*||.
	const Eigen::VectorXd* x_star = nullptr;
	// Record every iteration for k <= dense_window_end (diagnostics mode).
	long dense_window_end = -1;
	// When set, stores a copy of the state at every k <= dense_window_end
	// (including k = 0) for a later diagnostics pass.
	std::vector<SolverState>* state_log = nullptr;
	// Propagate NonFiniteValue (default) or mark the trace diverged.
	bool throw_on_divergence = true;
};

Trace run(const AggregativeGame& game, const MixingMatrix& w,
          const StepSchedule& schedule, const Eigen::VectorXd& x0,
          const RunOptions& options);

// Consensus violations ||z - 1 (x) zbar|| for an agent-stacked vector.
double consensus_violation(const Eigen::VectorXd& z, int n, int m);

} // namespace aggne
