#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aggne/quadratic_game.hpp"
#include "aggne/solver.hpp"

namespace aggne {

// Centralized reference solutions for the regularized variational
// inequality VI(R^{Nm}, F + eta * grad g).
struct RegularizedSolution {
	double eta;
	Eigen::VectorXd x;
	double residual; // ||F(x) + eta grad g(x)||
	long iterations_used;
};

// Damped fixed-point iteration x <- x - tau (F(x) + eta grad g(x)) with
// tau = eta mu_g / (L_F + eta L_1)^2, the classical strongly-monotone
// contraction step. Throws NoConvergence if tol is not reached.
RegularizedSolution solve_regularized_vi_fixed_point(
    const AggregativeGame& game, const GameConstants& constants, double eta,
    double tol, long max_iters);

// Direct path for quadratic games: solve (Fbig + eta Ubig) x = dbig - eta bbig.
RegularizedSolution solve_regularized_vi_direct(
    const QuadraticAggregativeGame& game, double eta);

// Exact optimal NE of a quadratic game via the saddle KKT system
// [[Ubig, Fbig^T], [Fbig, 0]] [x; lambda] = [-bbig; dbig]. A rank-deficient
// (but consistent) system falls back to a minimum-norm least-squares solve
// and sets least_squares_fallback; the x component is still unique.
struct OptimalNE {
	Eigen::VectorXd x;
	Eigen::VectorXd multipliers;
	double kkt_residual;
	bool least_squares_fallback;
};

OptimalNE solve_optimal_ne_qp(const QuadraticAggregativeGame& game);

// Regularized solutions x*_{eta_k} along the step schedule at the
// requested ascending iterations, plus drift norms between consecutive
// requested points.
struct TikhonovTrajectory {
	std::vector<RegularizedSolution> points;
	std::vector<double> drifts; // ||x*_{eta_{ks[i]}} - x*_{eta_{ks[i-1]}}||
};

TikhonovTrajectory tikhonov_trajectory(const QuadraticAggregativeGame& game,
                                       const StepSchedule& schedule,
                                       const std::vector<long>& ks);

// Euclidean norm of the pseudo-gradient; zero exactly at Nash equilibria.
double ne_residual(const AggregativeGame& game, const Eigen::VectorXd& x);

} // namespace aggne
