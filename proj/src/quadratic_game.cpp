#include "aggne/quadratic_game.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "aggne/errors.hpp"

namespace aggne {
namespace {

Eigen::Map<const Eigen::VectorXd> as_vec(std::span<const double> s) {
	return {s.data(), static_cast<Eigen::Index>(s.size())};
}

Eigen::Map<Eigen::VectorXd> as_vec(std::span<double> s) {
	return {s.data(), static_cast<Eigen::Index>(s.size())};
}

double spectral_norm(const Eigen::MatrixXd& a) {
	return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

} // namespace

QuadraticAggregativeGame::QuadraticAggregativeGame(
    GameDims dims, Eigen::VectorXd d, Eigen::MatrixXd c1, Eigen::VectorXd b1,
    Eigen::MatrixXd u, std::vector<Eigen::MatrixXd> c2, Eigen::VectorXd b2)
		: AggregativeGame(dims),
			d_(std::move(d)),
			c1_(std::move(c1)),
			b1_(std::move(b1)),
			c2_(std::move(c2)),
			b2_(std::move(b2)) {
	const int n = dims.n_players;
	const int m = dims.dim;
	if (d_.size() != n) throw ShapeMismatch("d must have one entry per player");
	if (c1_.rows() != m || c1_.cols() != m) throw ShapeMismatch("c1 must be m x m");
	if (b1_.size() != m) throw ShapeMismatch("b1 must have length m");
	if (u.rows() != m || u.cols() != m) throw ShapeMismatch("u must be m x m");
	if (static_cast<int>(c2_.size()) != n)
		throw ShapeMismatch("c2 needs one matrix per player");
	for (const auto& c : c2_)
		if (c.rows() != m || c.cols() != m) throw ShapeMismatch("c2_i must be m x m");
	if (b2_.size() != m) throw ShapeMismatch("b2 must have length m");

	u_sym_ = 0.5 * (u + u.transpose());

	const Eigen::MatrixXd ones_mm = Eigen::MatrixXd::Ones(m, m);
	const Eigen::Index nm = static_cast<Eigen::Index>(n) * m;
	f_big_ = Eigen::MatrixXd::Zero(nm, nm);
	u_big_ = Eigen::MatrixXd::Zero(nm, nm);
	d_big_ = Eigen::VectorXd::Zero(nm);
	b_big_ = Eigen::VectorXd::Zero(nm);
	for (int i = 0; i < n; ++i) {
		for (int j = 0; j < n; ++j) {
			auto fb = f_big_.block(static_cast<Eigen::Index>(i) * m,
			                       static_cast<Eigen::Index>(j) * m, m, m);
			auto ub = u_big_.block(static_cast<Eigen::Index>(i) * m,
			                       static_cast<Eigen::Index>(j) * m, m, m);
			fb = c1_ / n;
			ub = (c2_[i] + c2_[j].transpose()) / n;
			if (i == j) {
				fb += ones_mm + c1_.transpose() / n;
				ub += u_sym_;
			}
		}
		d_big_.segment(static_cast<Eigen::Index>(i) * m, m) =
		    Eigen::VectorXd::Constant(m, d_(i)) - b1_;
		b_big_.segment(static_cast<Eigen::Index>(i) * m, m) = b2_;
	}
}

void QuadraticAggregativeGame::grad1_f(int i, std::span<const double> xi,
                                       std::span<const double> y,
                                       std::span<double> out) const {
	// 1_m (1_m^T x_i - d_i) + C1 y + b1
	const auto x = as_vec(xi);
	const double load = x.sum() - d_(i);
	as_vec(out) = Eigen::VectorXd::Constant(dims().dim, load) + c1_ * as_vec(y) + b1_;
}

void QuadraticAggregativeGame::grad2_f(int i, std::span<const double> xi,
                                       std::span<const double>,
                                       std::span<double> out) const {
	(void)i;
	as_vec(out) = c1_.transpose() * as_vec(xi);
}

void QuadraticAggregativeGame::grad1_g(int i, std::span<const double> xi,
                                       std::span<const double> y,
                                       std::span<double> out) const {
	as_vec(out) = u_sym_ * as_vec(xi) + c2_[i] * as_vec(y) + b2_;
}

void QuadraticAggregativeGame::grad2_g(int i, std::span<const double> xi,
                                       std::span<const double>,
                                       std::span<double> out) const {
	as_vec(out) = c2_[i].transpose() * as_vec(xi);
}

double QuadraticAggregativeGame::f(int i, std::span<const double> xi,
                                   std::span<const double> y) const {
	const auto x = as_vec(xi);
	const double load = x.sum() - d_(i);
	return 0.5 * load * load + (c1_ * as_vec(y) + b1_).dot(x);
}

double QuadraticAggregativeGame::g(int i, std::span<const double> xi,
                                   std::span<const double> y) const {
	const auto x = as_vec(xi);
	return 0.5 * x.dot(u_sym_ * x) + (c2_[i] * as_vec(y) + b2_).dot(x);
}

QuadraticAggregativeGame ev_game(int n, int m, Eigen::VectorXd d,
                                 Eigen::MatrixXd c1, Eigen::VectorXd b1,
                                 Eigen::MatrixXd u,
                                 std::vector<Eigen::MatrixXd> c2,
                                 Eigen::VectorXd b2) {
	return QuadraticAggregativeGame({n, m}, std::move(d), std::move(c1),
	                                std::move(b1), std::move(u), std::move(c2),
	                                std::move(b2));
}

QuadraticAggregativeGame ev_paper_instance() {
	const int n = 5;
	const int m = 3;
	Eigen::VectorXd d(n);
	d << 1.0, 0.5, 0.8, 0.9, 0.6;
	Eigen::MatrixXd c1 = Eigen::MatrixXd::Zero(m, m);
	c1(0, 0) = 0.15;
	Eigen::VectorXd b1(m);
	b1 << 0.0, 0.15, 0.15;
	Eigen::MatrixXd u = Eigen::Vector3d(3.0, 4.0, 2.0).asDiagonal();
	const double c2_entries[15] = {0.1, 0.2, 0.3, 0.2, 0.3, 0.2, 0.4, 0.3,
	                               0.1, 0.4, 0.1, 0.2, 0.1, 0.1, 0.1};
	std::vector<Eigen::MatrixXd> c2;
	c2.reserve(n);
	for (int i = 0; i < n; ++i) {
		Eigen::Vector3d diag(c2_entries[3 * i], c2_entries[3 * i + 1],
		                     c2_entries[3 * i + 2]);
		c2.emplace_back(diag.asDiagonal());
	}
	Eigen::VectorXd b2 = Eigen::VectorXd::Constant(m, 0.5);
	return ev_game(n, m, d, c1, b1, u, c2, b2);
}

GameConstants estimate_constants(const QuadraticAggregativeGame& game) {
	const auto [n, m] = game.dims();
	const Eigen::Index nm = static_cast<Eigen::Index>(n) * m;

	// mu_g from the stacked social Hessian (symmetric by construction).
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(game.stacked_u());
	const double mu_g = es.eigenvalues().minCoeff();
	if (mu_g <= 0.0)
		throw NotStronglyConvex("social cost is not strongly convex");

	// Jacobian blocks of the two-argument stacked f-map
	// G_f(x, y)_i = 1(1^T x_i - d_i) + C1 y_i + b1 + (1/N) C1^T x_i.
	Eigen::MatrixXd axy_f(nm, 2 * nm);
	axy_f.setZero();
	const Eigen::MatrixXd ones_mm = Eigen::MatrixXd::Ones(m, m);
	for (int i = 0; i < n; ++i) {
		const Eigen::Index r = static_cast<Eigen::Index>(i) * m;
		axy_f.block(r, r, m, m) = ones_mm + game.price_slope().transpose() / n;
		axy_f.block(r, nm + r, m, m) = game.price_slope();
	}
	const double l_f = std::max(spectral_norm(game.stacked_f()),
	                            spectral_norm(axy_f));

	// Two-argument stacked g-map
	// G_g(x, y)_i = sym(U) x_i + C2_i y_i + b2 + (1/N) sum_j C2_j^T x_j.
	Eigen::MatrixXd axy_g(nm, 2 * nm);
	axy_g.setZero();
	for (int i = 0; i < n; ++i) {
		const Eigen::Index r = static_cast<Eigen::Index>(i) * m;
		for (int j = 0; j < n; ++j) {
			const Eigen::Index c = static_cast<Eigen::Index>(j) * m;
			axy_g.block(r, c, m, m) = game.coupling()[j].transpose() / n;
		}
		axy_g.block(r, r, m, m) += game.social_weight();
		axy_g.block(r, nm + r, m, m) = game.coupling()[i];
	}
	const double l_1 = std::max(spectral_norm(game.stacked_u()),
	                            spectral_norm(axy_g));

	double l_2 = 0.0;
	for (const auto& c : game.coupling())
		l_2 = std::max(l_2, spectral_norm(c));

	return {l_f, l_1, l_2, mu_g};
}

} // namespace aggne
