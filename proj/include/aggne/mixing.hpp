#pragma once

#include <Eigen/Dense>

#include "aggne/topology.hpp"

namespace aggne {

// Doubly-stochastic symmetric consensus weights with cached spectral data:
// rho is the spectral radius of W - ones/n (consensus contraction factor),
// norm_w_minus_i is ||W - I||_2. Immutable after construction.
class MixingMatrix {
 public:
	// Validates double stochasticity, symmetry and nonnegativity, and
	// computes the cached spectral quantities.
	explicit MixingMatrix(Eigen::MatrixXd w);

	int n() const { return static_cast<int>(w_.rows()); }
	const Eigen::MatrixXd& w() const { return w_; }
	double rho() const { return rho_; }
	double norm_w_minus_i() const { return norm_w_minus_i_; }

 private:
	Eigen::MatrixXd w_;
	double rho_;
	double norm_w_minus_i_;
};

// Metropolis-Hastings weights: w_ij = 1/(1 + max(deg_i, deg_j)) on edges,
// diagonal absorbs the remainder. Throws DisconnectedGraph.
MixingMatrix build_metropolis(const Topology& topology);

// Spectral radius of w - ones/n, computed as its largest singular value.
// Throws NotStochastic if row/column sums deviate beyond 1e-9.
double spectral_gap(const Eigen::MatrixXd& w);

} // namespace aggne
