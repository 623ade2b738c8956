#pragma once

// Shared helpers for the test binaries: random quadratic game instances
// with guaranteed strong convexity, and random mixing matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "aggne/mixing.hpp"
#include "aggne/quadratic_game.hpp"
#include "aggne/topology.hpp"

namespace aggne::test {

inline Eigen::MatrixXd random_matrix(int rows, int cols, double scale,
                                     std::mt19937_64& rng) {
	std::uniform_real_distribution<double> dist(-scale, scale);
	Eigen::MatrixXd m(rows, cols);
	for (int i = 0; i < rows; ++i)
		for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
	return m;
}

inline Eigen::VectorXd random_vector(int n, double scale,
                                     std::mt19937_64& rng) {
	std::uniform_real_distribution<double> dist(-scale, scale);
	Eigen::VectorXd v(n);
	for (int i = 0; i < n; ++i) v(i) = dist(rng);
	return v;
}

// Random instance with U diagonally dominant over the coupling terms, so
// the stacked social Hessian stays positive definite.
inline QuadraticAggregativeGame random_quadratic_game(int n, int m,
                                                      std::mt19937_64& rng) {
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	Eigen::VectorXd d(n);
	for (int i = 0; i < n; ++i) d(i) = 0.5 + 1.5 * unit(rng);

	Eigen::MatrixXd c1 = random_matrix(m, m, 0.1, rng);
	Eigen::VectorXd b1 = random_vector(m, 0.3, rng);

	Eigen::MatrixXd a = random_matrix(m, m, 0.5, rng);
	Eigen::MatrixXd u =
	    a.transpose() * a + 1.0 * Eigen::MatrixXd::Identity(m, m);

	std::vector<Eigen::MatrixXd> c2;
	c2.reserve(n);
	for (int i = 0; i < n; ++i) c2.push_back(random_matrix(m, m, 0.2, rng));
	Eigen::VectorXd b2 = random_vector(m, 0.5, rng);

	return ev_game(n, m, std::move(d), std::move(c1), std::move(b1),
	               std::move(u), std::move(c2), std::move(b2));
}

// Game with identically zero costs; fixed point of every update rule.
class ZeroGame final : public AggregativeGame {
 public:
	ZeroGame(int n, int m) : AggregativeGame({n, m}) {}

	void grad1_f(int, std::span<const double>, std::span<const double>,
	             std::span<double> out) const override {
		std::fill(out.begin(), out.end(), 0.0);
	}
	void grad2_f(int, std::span<const double>, std::span<const double>,
	             std::span<double> out) const override {
		std::fill(out.begin(), out.end(), 0.0);
	}
	void grad1_g(int, std::span<const double>, std::span<const double>,
	             std::span<double> out) const override {
		std::fill(out.begin(), out.end(), 0.0);
	}
	void grad2_g(int, std::span<const double>, std::span<const double>,
	             std::span<double> out) const override {
		std::fill(out.begin(), out.end(), 0.0);
	}
	bool has_scalar_costs() const override { return true; }
	double f(int, std::span<const double>,
	         std::span<const double>) const override {
		return 0.0;
	}
	double g(int, std::span<const double>,
	         std::span<const double>) const override {
		return 0.0;
	}
};

inline MixingMatrix random_mixing(int n, std::uint64_t seed) {
	if (n == 1) return MixingMatrix(Eigen::MatrixXd::Ones(1, 1));
	return build_metropolis(random_connected_topology(n, 0.5, seed));
}

} // namespace aggne::test
