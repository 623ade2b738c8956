#include "aggne/game.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "aggne/errors.hpp"

namespace aggne {

AggregativeGame::AggregativeGame(GameDims dims) : dims_(dims) {
	if (dims.n_players < 1 || dims.dim < 1)
		throw ShapeMismatch("game dimensions must be positive");
}

double AggregativeGame::f(int, std::span<const double>,
                          std::span<const double>) const {
	throw Error("scalar cost f not available for this game");
}

double AggregativeGame::g(int, std::span<const double>,
                          std::span<const double>) const {
	throw Error("scalar cost g not available for this game");
}

namespace {

std::span<const double> block(const Eigen::VectorXd& v, int i, int m) {
	return {v.data() + static_cast<std::ptrdiff_t>(i) * m,
	        static_cast<std::size_t>(m)};
}

Eigen::VectorXd aggregate_of(const Eigen::VectorXd& x, int n, int m) {
	Eigen::VectorXd xbar = Eigen::VectorXd::Zero(m);
	for (int i = 0; i < n; ++i) xbar += x.segment(static_cast<Eigen::Index>(i) * m, m);
	return xbar / n;
}

} // namespace

Eigen::VectorXd pseudo_gradient(const AggregativeGame& game,
                                const Eigen::VectorXd& x) {
	const auto [n, m] = game.dims();
	if (x.size() != static_cast<Eigen::Index>(n) * m)
		throw DimensionMismatch("pseudo_gradient: x has wrong length");
	const Eigen::VectorXd xbar = aggregate_of(x, n, m);
	const std::span<const double> y{xbar.data(), static_cast<std::size_t>(m)};
	Eigen::VectorXd out(x.size());
	Eigen::VectorXd g2(m);
	for (int i = 0; i < n; ++i) {
		auto oi = out.segment(static_cast<Eigen::Index>(i) * m, m);
		game.grad1_f(i, block(x, i, m), y, {oi.data(), static_cast<std::size_t>(m)});
		game.grad2_f(i, block(x, i, m), y, {g2.data(), static_cast<std::size_t>(m)});
		oi += g2 / n;
	}
	return out;
}

Eigen::VectorXd social_gradient(const AggregativeGame& game,
                                const Eigen::VectorXd& x) {
	const auto [n, m] = game.dims();
	if (x.size() != static_cast<Eigen::Index>(n) * m)
		throw DimensionMismatch("social_gradient: x has wrong length");
	const Eigen::VectorXd xbar = aggregate_of(x, n, m);
	const std::span<const double> y{xbar.data(), static_cast<std::size_t>(m)};
	Eigen::VectorXd g2sum = Eigen::VectorXd::Zero(m);
	Eigen::VectorXd g2(m);
	for (int j = 0; j < n; ++j) {
		game.grad2_g(j, block(x, j, m), y, {g2.data(), static_cast<std::size_t>(m)});
		g2sum += g2;
	}
	g2sum /= n;
	Eigen::VectorXd out(x.size());
	for (int i = 0; i < n; ++i) {
		auto oi = out.segment(static_cast<Eigen::Index>(i) * m, m);
		game.grad1_g(i, block(x, i, m), y, {oi.data(), static_cast<std::size_t>(m)});
		oi += g2sum;
	}
	return out;
}

namespace {

using ScalarEval = double (*)(const AggregativeGame&, int,
                              std::span<const double>, std::span<const double>);
using GradEval = void (*)(const AggregativeGame&, int, std::span<const double>,
                          std::span<const double>, std::span<double>);

// Central difference of `eval` in the argument selected by `wrt_second`,
// compared against the callback gradient. Returns max relative deviation.
double probe_callback(const AggregativeGame& game, ScalarEval eval,
                      GradEval grad, bool wrt_second, int trials,
                      std::mt19937_64& rng) {
	const auto [n, m] = game.dims();
	std::normal_distribution<double> normal(0.0, 1.0);
	const double h = 1e-6;
	double worst = 0.0;
	Eigen::VectorXd xi(m), y(m), gvec(m), fd(m);
	for (int t = 0; t < trials; ++t) {
		const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
		for (int c = 0; c < m; ++c) {
			xi(c) = normal(rng);
			y(c) = normal(rng);
		}
		grad(game, i, {xi.data(), static_cast<std::size_t>(m)},
		     {y.data(), static_cast<std::size_t>(m)},
		     {gvec.data(), static_cast<std::size_t>(m)});
		Eigen::VectorXd& arg = wrt_second ? y : xi;
		for (int c = 0; c < m; ++c) {
			const double saved = arg(c);
			arg(c) = saved + h;
			const double fp = eval(game, i, {xi.data(), static_cast<std::size_t>(m)},
			                       {y.data(), static_cast<std::size_t>(m)});
			arg(c) = saved - h;
			const double fm = eval(game, i, {xi.data(), static_cast<std::size_t>(m)},
			                       {y.data(), static_cast<std::size_t>(m)});
			arg(c) = saved;
			fd(c) = (fp - fm) / (2.0 * h);
		}
		const double scale = std::max(1.0, gvec.norm());
		worst = std::max(worst, (fd - gvec).norm() / scale);
	}
	return worst;
}

} // namespace

GradientCheckReport check_gradients(const AggregativeGame& game, int trials,
                                    std::uint64_t seed) {
	if (!game.has_scalar_costs())
		throw Error("check_gradients: scalar evaluators not available");
	constexpr double kTol = 1e-5;
	std::mt19937_64 rng(seed);

	const ScalarEval eval_f = [](const AggregativeGame& g, int i,
	                             std::span<const double> xi,
	                             std::span<const double> y) { return g.f(i, xi, y); };
	const ScalarEval eval_g = [](const AggregativeGame& g, int i,
	                             std::span<const double> xi,
	                             std::span<const double> y) { return g.g(i, xi, y); };

	GradientCheckReport report;
	report.trials = trials;
	auto add = [&](const char* name, ScalarEval eval, GradEval grad,
	               bool wrt_second) {
		const double dev = probe_callback(game, eval, grad, wrt_second, trials, rng);
		report.callbacks.push_back({name, dev});
	};
	add("grad1_f", eval_f,
	    [](const AggregativeGame& g, int i, std::span<const double> xi,
	       std::span<const double> y, std::span<double> out) { g.grad1_f(i, xi, y, out); },
	    false);
	add("grad2_f", eval_f,
	    [](const AggregativeGame& g, int i, std::span<const double> xi,
	       std::span<const double> y, std::span<double> out) { g.grad2_f(i, xi, y, out); },
	    true);
	add("grad1_g", eval_g,
	    [](const AggregativeGame& g, int i, std::span<const double> xi,
	       std::span<const double> y, std::span<double> out) { g.grad1_g(i, xi, y, out); },
	    false);
	add("grad2_g", eval_g,
	    [](const AggregativeGame& g, int i, std::span<const double> xi,
	       std::span<const double> y, std::span<double> out) { g.grad2_g(i, xi, y, out); },
	    true);

	report.passed = true;
	for (const auto& cb : report.callbacks) {
		if (cb.max_rel_deviation > kTol) {
			report.passed = false;
			std::ostringstream msg;
			msg << "gradient mismatch in " << cb.name << ": relative deviation "
			    << cb.max_rel_deviation << " exceeds " << kTol;
			throw GradientMismatch(msg.str());
		}
	}
	return report;
}

} // namespace aggne
