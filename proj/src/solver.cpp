#include "aggne/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "aggne/errors.hpp"
#include "aggne/kernels.hpp"

namespace aggne {

void StepSchedule::validate() const {
	if (!(gamma0 > 0.0) || !(eta0 > 0.0))
		throw ValidationError("schedule: gamma0 and eta0 must be positive");
	if (!(0.0 < b && b < a && a < 1.0))
		throw ValidationError("schedule: exponents must satisfy 0 < b < a < 1");
	if (!(a + b < 1.0))
		throw ValidationError("schedule: exponents must satisfy a + b < 1");
}

namespace {

std::span<const double> blk(const Eigen::VectorXd& z, int i, int m) {
	return {z.data() + static_cast<std::ptrdiff_t>(i) * m,
	        static_cast<std::size_t>(m)};
}

std::span<double> blk(Eigen::VectorXd& z, int i, int m) {
	return {z.data() + static_cast<std::ptrdiff_t>(i) * m,
	        static_cast<std::size_t>(m)};
}

} // namespace

SolverState init_state(const AggregativeGame& game, const Eigen::VectorXd& x0) {
	const auto [n, m] = game.dims();
	if (x0.size() != static_cast<Eigen::Index>(n) * m)
		throw ShapeMismatch("init_state: x0 has wrong length");
	SolverState s;
	s.k = 0;
	s.x = x0;
	s.v = x0;
	s.y.resize(x0.size());
	s.g2_cache.resize(x0.size());
	for (int i = 0; i < n; ++i)
		game.grad2_g(i, blk(s.x, i, m), blk(s.v, i, m), blk(s.y, i, m));
	s.g2_cache = s.y;
	return s;
}

void step(SolverState& state, const AggregativeGame& game,
          const MixingMatrix& w, const StepSchedule& schedule) {
	const auto [n, m] = game.dims();
	if (w.n() != n) throw ShapeMismatch("step: mixing matrix size != N");
	const Eigen::Index nm = static_cast<Eigen::Index>(n) * m;
	const double gamma = schedule.gamma(state.k);
	const double eta = schedule.eta(state.k);
	const auto& ops = kernels::active();

	thread_local Eigen::VectorXd x_new, v_new, y_new, g2_new, grad, tmp;
	x_new.resize(nm);
	v_new.resize(nm);
	y_new.resize(nm);
	g2_new.resize(nm);
	grad.resize(m);
	tmp.resize(m);

	// Decision step: all agents read round-k values.
	for (int i = 0; i < n; ++i) {
		auto xi = blk(state.x, i, m);
		auto vi = blk(state.v, i, m);
		game.grad1_f(i, xi, vi, {grad.data(), static_cast<std::size_t>(m)});
		game.grad2_f(i, xi, vi, {tmp.data(), static_cast<std::size_t>(m)});
		ops.axpy(1.0 / n, tmp.data(), grad.data(), m);
		game.grad1_g(i, xi, vi, {tmp.data(), static_cast<std::size_t>(m)});
		ops.axpy(eta, tmp.data(), grad.data(), m);
		ops.axpy(eta, state.y.data() + static_cast<std::ptrdiff_t>(i) * m,
		         grad.data(), m);
		ops.combine(xi.data(), -gamma, grad.data(),
		            x_new.data() + static_cast<std::ptrdiff_t>(i) * m, m);
	}

	// Aggregate tracker: gossip plus innovation x^{k+1} - x^k.
	ops.mix_rows(w.w().data(), state.v.data(), v_new.data(), n, m);
	ops.axpy(1.0, x_new.data(), v_new.data(), nm);
	ops.axpy(-1.0, state.x.data(), v_new.data(), nm);

	// Social-gradient tracker: gossip plus grad2_g difference; the old
	// value comes from the cache carried across rounds.
	ops.mix_rows(w.w().data(), state.y.data(), y_new.data(), n, m);
	for (int i = 0; i < n; ++i)
		game.grad2_g(i, blk(x_new, i, m), blk(v_new, i, m), blk(g2_new, i, m));
	ops.axpy(1.0, g2_new.data(), y_new.data(), nm);
	ops.axpy(-1.0, state.g2_cache.data(), y_new.data(), nm);

	const double probe = x_new.sum() + v_new.sum() + y_new.sum();
	if (!std::isfinite(probe)) {
		std::ostringstream msg;
		msg << "non-finite value at iteration " << state.k
		    << " (step size too large?)";
		throw NonFiniteValue(state.k, msg.str());
	}

	state.x.swap(x_new);
	state.v.swap(v_new);
	state.y.swap(y_new);
	state.g2_cache.swap(g2_new);
	++state.k;
}

SafeBound gamma0_safe_bound(const GameConstants& constants, double eta0,
                            double rho, double norm_w_minus_i) {
	if (rho >= 1.0)
		throw DegenerateSpectralGap("spectral gap requires rho < 1");
	if (!(constants.mu_g > 0.0))
		throw NotStronglyConvex("safe bound requires mu_g > 0");
	if (!(eta0 > 0.0)) throw ValidationError("safe bound requires eta0 > 0");

	const double inf = std::numeric_limits<double>::infinity();
	const double mu = constants.mu_g;
	const double l2 = constants.l_2;
	const double lip = constants.l_f + eta0 * constants.l_1;
	const double one_minus_rho = 1.0 - rho;

	SafeBound sb;
	sb.c1 = eta0 * eta0 * mu * l2 * lip + 8.0 * eta0 * l2 * lip * lip;
	sb.c2 = 0.5 * eta0 * eta0 * mu * l2 * norm_w_minus_i +
	        one_minus_rho * lip * lip +
	        2.0 * eta0 * l2 * lip * norm_w_minus_i +
	        2.0 * eta0 * l2 * one_minus_rho * lip;
	sb.c3 = 0.125 * mu * one_minus_rho * one_minus_rho;

	sb.per_bound[0] = lip > 0.0 ? 1.0 / lip : inf;
	sb.per_bound[1] = one_minus_rho / (eta0 * mu + 2.0 * lip);
	sb.per_bound[2] = one_minus_rho / (eta0 * mu + 4.0 * l2 * eta0);
	if (sb.c1 > 0.0) {
		sb.per_bound[3] =
		    (-sb.c2 + std::sqrt(sb.c2 * sb.c2 + 4.0 * sb.c1 * sb.c3 * eta0)) /
		    (2.0 * sb.c1);
	} else {
		// c1 = 0 (L_2 = 0): the quadratic degenerates; take the limit.
		sb.per_bound[3] = sb.c2 > 0.0 ? sb.c3 * eta0 / sb.c2 : inf;
	}

	sb.gamma0_max = sb.per_bound[0];
	for (double b : sb.per_bound) sb.gamma0_max = std::min(sb.gamma0_max, b);
	return sb;
}

double consensus_violation(const Eigen::VectorXd& z, int n, int m) {
	Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
	for (int i = 0; i < n; ++i) mean += z.segment(static_cast<Eigen::Index>(i) * m, m);
	mean /= n;
	double ss = 0.0;
	for (int i = 0; i < n; ++i)
		ss += (z.segment(static_cast<Eigen::Index>(i) * m, m) - mean).squaredNorm();
	return std::sqrt(ss);
}

Trace run(const AggregativeGame& game, const MixingMatrix& w,
          const StepSchedule& schedule, const Eigen::VectorXd& x0,
          const RunOptions& options) {
	const auto [n, m] = game.dims();
	if (options.max_iters < 0)
		throw ValidationError("run: max_iters must be >= 0");
	if (options.record_every < 1)
		throw ValidationError("run: record_every must be >= 1");

	Trace trace;
	trace.has_gap = options.x_star != nullptr;

	SolverState state = init_state(game, x0);
	const long log_end = options.dense_window_end >= 0
	                         ? options.dense_window_end + 1
	                         : -1;

	auto should_record = [&](long k) {
		return k % options.record_every == 0 || k == options.max_iters ||
		       (options.dense_window_end >= 0 && k <= options.dense_window_end);
	};
	auto record = [&](long k) {
		TraceRow row;
		row.k = k;
		row.gamma_k = schedule.gamma(k);
		row.eta_k = schedule.eta(k);
		row.ne_residual = pseudo_gradient(game, state.x).norm();
		row.consensus_v = consensus_violation(state.v, n, m);
		row.consensus_y = consensus_violation(state.y, n, m);
		if (options.x_star != nullptr)
			row.gap_to_xstar = (state.x - *options.x_star).norm();
		trace.rows.push_back(row);
	};

	if (options.state_log != nullptr) options.state_log->push_back(state);
	record(0);
	for (long k = 0; k < options.max_iters; ++k) {
		try {
			step(state, game, w, schedule);
		} catch (const NonFiniteValue& e) {
			if (options.throw_on_divergence) throw;
			trace.diverged = true;
			trace.diverged_k = e.k;
			return trace;
		}
		if (options.state_log != nullptr && state.k <= log_end)
			options.state_log->push_back(state);
		if (should_record(state.k)) record(state.k);
	}
	return trace;
}

} // namespace aggne
