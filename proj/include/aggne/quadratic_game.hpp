#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aggne/game.hpp"

namespace aggne {

// Energy-market style quadratic aggregative game.
//
// Player costs:
//   f_i(x_i, xbar) = 1/2 (1^T x_i - d_i)^2 + (C1 xbar + b1)^T x_i
//   g_i(x_i, xbar) = 1/2 x_i^T U x_i + (C2_i xbar + b2)^T x_i
//
// U is symmetrized internally so grad1_g is the true gradient for any
// input matrix. The stacked pseudo-gradient and social gradient are
// affine, F(x) = Fbig x - dbig and grad g(x) = Ubig x + bbig, with the
// stacked matrices cached at construction.
class QuadraticAggregativeGame final : public AggregativeGame {
 public:
	QuadraticAggregativeGame(GameDims dims, Eigen::VectorXd d,
	                         Eigen::MatrixXd c1, Eigen::VectorXd b1,
	                         Eigen::MatrixXd u,
	                         std::vector<Eigen::MatrixXd> c2,
	                         Eigen::VectorXd b2);

	void grad1_f(int i, std::span<const double> xi, std::span<const double> y,
	             std::span<double> out) const override;
	void grad2_f(int i, std::span<const double> xi, std::span<const double> y,
	             std::span<double> out) const override;
	void grad1_g(int i, std::span<const double> xi, std::span<const double> y,
	             std::span<double> out) const override;
	void grad2_g(int i, std::span<const double> xi, std::span<const double> y,
	             std::span<double> out) const override;

	bool has_scalar_costs() const override { return true; }
	double f(int i, std::span<const double> xi,
	         std::span<const double> y) const override;
	double g(int i, std::span<const double> xi,
	         std::span<const double> y) const override;

	// Stacked affine operators.
	const Eigen::MatrixXd& stacked_f() const { return f_big_; }
	const Eigen::VectorXd& stacked_d() const { return d_big_; }
	const Eigen::MatrixXd& stacked_u() const { return u_big_; }
	const Eigen::VectorXd& stacked_b() const { return b_big_; }

	const Eigen::VectorXd& demand() const { return d_; }
	const Eigen::MatrixXd& price_slope() const { return c1_; }
	const Eigen::VectorXd& price_base() const { return b1_; }
	const Eigen::MatrixXd& social_weight() const { return u_sym_; }
	const std::vector<Eigen::MatrixXd>& coupling() const { return c2_; }
	const Eigen::VectorXd& social_base() const { return b2_; }

 private:
	Eigen::VectorXd d_;
	Eigen::MatrixXd c1_;
	Eigen::VectorXd b1_;
	Eigen::MatrixXd u_sym_;
	std::vector<Eigen::MatrixXd> c2_;
	Eigen::VectorXd b2_;

	Eigen::MatrixXd f_big_, u_big_;
	Eigen::VectorXd d_big_, b_big_;
};

QuadraticAggregativeGame ev_game(int n, int m, Eigen::VectorXd d,
                                 Eigen::MatrixXd c1, Eigen::VectorXd b1,
                                 Eigen::MatrixXd u,
                                 std::vector<Eigen::MatrixXd> c2,
                                 Eigen::VectorXd b2);

// The 5-player, 3-period EV charging instance used in the experiments:
// d = [1, 0.5, 0.8, 0.9, 0.6], price p(xbar) = 0.15 xbar in period 1 and
// flat 0.15 in periods 2-3, U = diag(3,4,2), per-player diagonal coupling
// matrices, b2 = 0.5.
QuadraticAggregativeGame ev_paper_instance();

// Exact matrix-norm constants for a quadratic game:
//   l_f  = max(||Fbig||, ||[Ax Ay]||)  over the two-argument f-map,
//   l_1  = max(||Ubig||, ||[Bx By]||)  over the two-argument g-map,
//   l_2  = || blockdiag(C2_i^T) ||,
//   mu_g = lambda_min(Ubig).
// Throws NotStronglyConvex when lambda_min(Ubig) <= 0.
GameConstants estimate_constants(const QuadraticAggregativeGame& game);

} // namespace aggne
