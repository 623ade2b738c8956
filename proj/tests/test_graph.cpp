#include <doctest.h>

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "aggne/errors.hpp"
#include "aggne/mixing.hpp"
#include "aggne/topology.hpp"

using aggne::MixingMatrix;
using aggne::Topology;

TEST_CASE("topology normalizes, sorts and answers queries") {
	Topology t(4, {{2, 0}, {1, 0}, {3, 2}});
	CHECK(t.n() == 4);
	REQUIRE(t.edges().size() == 3);
	CHECK(t.edges()[0] == std::pair<int, int>{0, 1});
	CHECK(t.edges()[1] == std::pair<int, int>{0, 2});
	CHECK(t.edges()[2] == std::pair<int, int>{2, 3});
	CHECK(t.has_edge(0, 2));
	CHECK(t.has_edge(2, 0));
	CHECK_FALSE(t.has_edge(1, 3));
	CHECK(t.degrees() == std::vector<int>{2, 1, 2, 1});
	CHECK(t.connected());

	Topology split(4, {{0, 1}, {2, 3}});
	CHECK_FALSE(split.connected());
}

TEST_CASE("complete topology") {
	Topology t = aggne::complete_topology(5);
	CHECK(t.edges().size() == 10);
	CHECK(t.connected());
}

TEST_CASE("metropolis weights on small fixtures") {
	SUBCASE("2-node path averages in one step") {
		MixingMatrix w = aggne::build_metropolis(Topology(2, {{0, 1}}));
		CHECK(w.w()(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
		CHECK(w.w()(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
		CHECK(w.rho() == doctest::Approx(0.0).epsilon(1e-12));
	}
	SUBCASE("triangle gives ones/3") {
		MixingMatrix w =
		    aggne::build_metropolis(Topology(3, {{0, 1}, {1, 2}, {0, 2}}));
		for (int i = 0; i < 3; ++i)
			for (int j = 0; j < 3; ++j)
				CHECK(w.w()(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
		CHECK(w.rho() == doctest::Approx(0.0).epsilon(1e-12));
	}
	SUBCASE("3-node path") {
		MixingMatrix w = aggne::build_metropolis(Topology(3, {{0, 1}, {1, 2}}));
		Eigen::Matrix3d expected;
		expected << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3,
		    2.0 / 3;
		CHECK((w.w() - expected).cwiseAbs().maxCoeff() < 1e-15);
		// Eigenvalues of W are {1, 2/3, 0}: second-largest modulus is 2/3.
		CHECK(w.rho() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
	}
	SUBCASE("disconnected graph is rejected") {
		CHECK_THROWS_AS(aggne::build_metropolis(Topology(4, {{0, 1}, {2, 3}})),
		                aggne::DisconnectedGraph);
	}
}

TEST_CASE("spectral gap endpoints") {
	CHECK(aggne::spectral_gap(Eigen::MatrixXd::Identity(3, 3)) ==
	      doctest::Approx(1.0).epsilon(1e-12));
	CHECK(aggne::spectral_gap(Eigen::MatrixXd::Constant(4, 4, 0.25)) ==
	      doctest::Approx(0.0).epsilon(1e-12));
	Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
	bad(0, 0) = 0.5; // row sum 0.5
	CHECK_THROWS_AS(aggne::spectral_gap(bad), aggne::NotStochastic);
}

TEST_CASE("spectral gap against a dense eigen-decomposition oracle") {
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> dist(0.0, 1.0);
	for (int trial = 0; trial < 10; ++trial) {
		// Random symmetric doubly-stochastic matrix via lazy-walk mixture.
		const int n = 3 + static_cast<int>(rng() % 4);
		Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
		for (int i = 0; i < n; ++i)
			for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = dist(rng);
		const double scale = 1.0 / (2.0 * n);
		a *= scale;
		for (int i = 0; i < n; ++i) a(i, i) = 1.0 - a.row(i).sum();

		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
		    a - Eigen::MatrixXd::Constant(n, n, 1.0 / n));
		const double oracle = es.eigenvalues().cwiseAbs().maxCoeff();
		CHECK(aggne::spectral_gap(a) == doctest::Approx(oracle).epsilon(1e-10));
	}
}

TEST_CASE("mixing matrix validation") {
	Eigen::MatrixXd asym(2, 2);
	asym << 0.6, 0.4, 0.3, 0.7; // not column-stochastic / not symmetric
	CHECK_THROWS_AS(MixingMatrix{asym}, aggne::NotStochastic);

	Eigen::MatrixXd neg(2, 2);
	neg << 1.5, -0.5, -0.5, 1.5;
	CHECK_THROWS_AS(MixingMatrix{neg}, aggne::NotStochastic);

	MixingMatrix ok(Eigen::MatrixXd::Constant(2, 2, 0.5));
	CHECK(ok.norm_w_minus_i() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random connected topology") {
	SUBCASE("degenerate draws") {
		Topology t2 = aggne::random_connected_topology(2, 1.0, 99);
		REQUIRE(t2.edges().size() == 1);
		CHECK(t2.edges()[0] == std::pair<int, int>{0, 1});

		Topology t5 = aggne::random_connected_topology(5, 1.0, 3);
		CHECK(t5.edges().size() == 10);
	}
	SUBCASE("deterministic per seed and always connected") {
		Topology a = aggne::random_connected_topology(5, 0.3, 42);
		Topology b = aggne::random_connected_topology(5, 0.3, 42);
		CHECK(a.edges() == b.edges());
		CHECK(a.connected());
		CHECK(a.edges().size() >= 4); // spanning a connected 5-node graph
		for (std::uint64_t seed = 0; seed < 20; ++seed) {
			CHECK(aggne::random_connected_topology(6, 0.15, seed).connected());
		}
	}
}

TEST_CASE("consensus step contracts disagreement by rho") {
	MixingMatrix w = aggne::build_metropolis(Topology(3, {{0, 1}, {1, 2}}));
	std::mt19937_64 rng(5);
	std::normal_distribution<double> dist;
	for (int trial = 0; trial < 20; ++trial) {
		Eigen::VectorXd z(3);
		for (int i = 0; i < 3; ++i) z(i) = dist(rng);
		Eigen::VectorXd mean = Eigen::VectorXd::Constant(3, z.mean());
		Eigen::VectorXd next = w.w() * z;
		CHECK((next - mean).norm() <= w.rho() * (z - mean).norm() + 1e-12);
		CHECK(next.mean() == doctest::Approx(z.mean()).epsilon(1e-12));
	}
}
