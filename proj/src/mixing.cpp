#include "aggne/mixing.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "aggne/errors.hpp"

namespace aggne {
namespace {

constexpr double kStochTol = 1e-12;

void validate_weights(const Eigen::MatrixXd& w) {
	const int n = static_cast<int>(w.rows());
	if (w.cols() != n) throw NotStochastic("mixing matrix must be square");
	for (int i = 0; i < n; ++i) {
		if (std::abs(w.row(i).sum() - 1.0) > kStochTol)
			throw NotStochastic("row sum deviates from 1");
		if (std::abs(w.col(i).sum() - 1.0) > kStochTol)
			throw NotStochastic("column sum deviates from 1");
		for (int j = 0; j < n; ++j) {
			if (w(i, j) < 0.0) throw NotStochastic("negative weight");
			if (std::abs(w(i, j) - w(j, i)) > kStochTol)
				throw NotStochastic("weights not symmetric");
		}
	}
}

} // namespace

MixingMatrix::MixingMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {
	validate_weights(w_);
	rho_ = spectral_gap(w_);
	const int n = this->n();
	Eigen::MatrixXd wmi = w_ - Eigen::MatrixXd::Identity(n, n);
	norm_w_minus_i_ =
	    Eigen::JacobiSVD<Eigen::MatrixXd>(wmi).singularValues()(0);
}

MixingMatrix build_metropolis(const Topology& topology) {
	if (!topology.connected())
		throw DisconnectedGraph("metropolis weights need a connected graph");
	const int n = topology.n();
	const std::vector<int> deg = topology.degrees();
	Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
	for (auto [i, j] : topology.edges()) {
		const double wij = 1.0 / (1.0 + std::max(deg[i], deg[j]));
		w(i, j) = wij;
		w(j, i) = wij;
	}
	for (int i = 0; i < n; ++i) w(i, i) = 1.0 - (w.row(i).sum() - w(i, i));
	return MixingMatrix(std::move(w));
}

double spectral_gap(const Eigen::MatrixXd& w) {
	const int n = static_cast<int>(w.rows());
	if (w.cols() != n) throw NotStochastic("matrix must be square");
	for (int i = 0; i < n; ++i) {
		if (std::abs(w.row(i).sum() - 1.0) > 1e-9 ||
		    std::abs(w.col(i).sum() - 1.0) > 1e-9)
			throw NotStochastic("row/column sums deviate beyond 1e-9");
	}
	Eigen::MatrixXd dev = w - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
	return Eigen::JacobiSVD<Eigen::MatrixXd>(dev).singularValues()(0);
}

} // namespace aggne
