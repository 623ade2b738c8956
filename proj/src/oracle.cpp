#include "aggne/oracle.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

#include "aggne/errors.hpp"

namespace aggne {

RegularizedSolution solve_regularized_vi_fixed_point(
    const AggregativeGame& game, const GameConstants& constants, double eta,
    double tol, long max_iters) {
	if (!(eta > 0.0)) throw ValidationError("regularized VI requires eta > 0");
	if (!(constants.mu_g > 0.0))
		throw NotStronglyConvex("regularized VI oracle requires mu_g > 0");
	const double lip = constants.l_f + eta * constants.l_1;
	const double tau = eta * constants.mu_g / (lip * lip);

	const auto [n, m] = game.dims();
	Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * m);
	double res = 0.0;
	for (long it = 0; it <= max_iters; ++it) {
		Eigen::VectorXd map =
		    pseudo_gradient(game, x) + eta * social_gradient(game, x);
		res = map.norm();
		if (res <= tol) return {eta, std::move(x), res, it};
		x -= tau * map;
	}
	std::ostringstream msg;
	msg << "regularized VI fixed point: residual " << res << " > " << tol
	    << " after " << max_iters << " iterations";
	throw NoConvergence(msg.str());
}

RegularizedSolution solve_regularized_vi_direct(
    const QuadraticAggregativeGame& game, double eta) {
	if (!(eta > 0.0)) throw ValidationError("regularized VI requires eta > 0");
	Eigen::MatrixXd a = game.stacked_f() + eta * game.stacked_u();
	Eigen::VectorXd rhs = game.stacked_d() - eta * game.stacked_b();
	Eigen::VectorXd x = a.partialPivLu().solve(rhs);
	const double res =
	    (pseudo_gradient(game, x) + eta * social_gradient(game, x)).norm();
	return {eta, std::move(x), res, 0};
}

OptimalNE solve_optimal_ne_qp(const QuadraticAggregativeGame& game) {
	const Eigen::Index nm = game.stacked_f().rows();
	Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(2 * nm, 2 * nm);
	kkt.topLeftCorner(nm, nm) = game.stacked_u();
	kkt.topRightCorner(nm, nm) = game.stacked_f().transpose();
	kkt.bottomLeftCorner(nm, nm) = game.stacked_f();
	Eigen::VectorXd rhs(2 * nm);
	rhs.head(nm) = -game.stacked_b();
	rhs.tail(nm) = game.stacked_d();

	OptimalNE out;
	Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
	Eigen::VectorXd sol;
	if (lu.isInvertible()) {
		sol = lu.solve(rhs);
		out.least_squares_fallback = false;
	} else {
		// Rank-deficient constraint matrix: minimum-norm least-squares
		// solution. The x block is still the unique QP minimizer as long
		// as the system is consistent.
		sol = kkt.completeOrthogonalDecomposition().solve(rhs);
		out.least_squares_fallback = true;
	}
	out.kkt_residual = (kkt * sol - rhs).norm();
	if (!std::isfinite(out.kkt_residual) ||
	    (out.least_squares_fallback && out.kkt_residual > 1e-6))
		throw SingularKKT("KKT system is singular and inconsistent");
	out.x = sol.head(nm);
	out.multipliers = sol.tail(nm);
	return out;
}

TikhonovTrajectory tikhonov_trajectory(const QuadraticAggregativeGame& game,
                                       const StepSchedule& schedule,
                                       const std::vector<long>& ks) {
	if (ks.empty())
		throw ValidationError("tikhonov_trajectory: ks must be nonempty");
	for (std::size_t i = 1; i < ks.size(); ++i)
		if (ks[i] <= ks[i - 1])
			throw ValidationError("tikhonov_trajectory: ks must be ascending");

	TikhonovTrajectory traj;
	traj.points.reserve(ks.size());
	for (long k : ks)
		traj.points.push_back(
		    solve_regularized_vi_direct(game, schedule.eta(k)));
	for (std::size_t i = 1; i < traj.points.size(); ++i)
		traj.drifts.push_back(
		    (traj.points[i].x - traj.points[i - 1].x).norm());
	return traj;
}

double ne_residual(const AggregativeGame& game, const Eigen::VectorXd& x) {
	return pseudo_gradient(game, x).norm();
}

} // namespace aggne
