#include "aggne/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aggne/errors.hpp"

namespace aggne {

namespace {
constexpr double kSlack = 1e-8;
}

ErrorVector compute_delta(const SolverState& state, const AggregativeGame& game,
                          const StepSchedule& schedule,
                          const RegularizedSolution& oracle_prev) {
	if (state.k < 1)
		throw IterationMismatch("compute_delta requires k >= 1");
	const double eta_prev = schedule.eta(state.k - 1);
	if (std::abs(oracle_prev.eta - eta_prev) >
	    1e-12 * std::max(1.0, std::abs(eta_prev)))
		throw IterationMismatch("oracle point eta does not match eta_{k-1}");
	const auto [n, m] = game.dims();
	ErrorVector delta;
	delta.k = state.k;
	delta.dist_trajectory = (state.x - oracle_prev.x).norm();
	delta.consensus_v = consensus_violation(state.v, n, m);
	delta.consensus_y = consensus_violation(state.y, n, m);
	return delta;
}

RecursionData build_recursion(long k, const StepSchedule& schedule,
                              const GameConstants& constants, double rho,
                              double norm_w_minus_i, double c_const) {
	if (k < 1) throw IterationMismatch("build_recursion requires k >= 1");
	const double gamma = schedule.gamma(k);
	const double eta = schedule.eta(k);
	const double mu = constants.mu_g;
	const double l2 = constants.l_2;
	const double lip_k = constants.l_f + eta * constants.l_1;
	const double lip_0 = constants.l_f + schedule.eta0 * constants.l_1;
	const double cap = schedule.gamma_cap(k);
	const double alpha = 1.0 - 0.5 * gamma * eta * mu;

	RecursionData r;
	r.k = k;
	r.h_matrix << 1.0 - gamma * eta * mu, gamma * lip_k, gamma * eta,
	    2.0 * gamma * lip_k, rho + gamma * lip_k, gamma * eta,
	    4.0 * l2 * gamma * lip_k,
	    l2 * norm_w_minus_i + 2.0 * l2 * gamma * lip_k,
	    rho + 2.0 * l2 * gamma * eta;
	r.h_vector << c_const / mu * cap,
	    2.0 * gamma * c_const * lip_k / mu * cap,
	    4.0 * l2 * gamma * c_const * lip_k / mu * cap;

	const double hat_diag = alpha - 0.5 * (1.0 - rho);
	r.h_hat << 1.0 - gamma * eta * mu, gamma * lip_0, gamma * schedule.eta0,
	    2.0 * gamma * lip_0, hat_diag, gamma * schedule.eta0,
	    4.0 * l2 * gamma * lip_0,
	    l2 * norm_w_minus_i + 2.0 * l2 * gamma * lip_0, hat_diag;

	const double theta_scale = std::max(
	    {1.0, 2.0 * schedule.gamma0 * lip_0, 4.0 * l2 * schedule.gamma0 * lip_0});
	r.alpha = alpha;
	r.theta = theta_scale * std::numbers::sqrt3 * c_const / mu;
	r.gamma_cap = cap;
	r.c_const = c_const;
	return r;
}

namespace {

AuditReport finalize(AuditReport report) {
	report.passed = report.violations.empty();
	return report;
}

} // namespace

AuditReport check_recursion(std::span<const ErrorVector> deltas,
                            std::span<const RecursionData> recs) {
	if (deltas.size() != recs.size() + 1)
		throw IterationMismatch("check_recursion: need one delta per k plus k+1");
	AuditReport report;
	report.min_margin = std::numeric_limits<double>::infinity();
	report.checked = 0;
	for (std::size_t i = 0; i < recs.size(); ++i) {
		if (deltas[i].k != recs[i].k || deltas[i + 1].k != recs[i].k + 1)
			throw IterationMismatch("check_recursion: ks are not consecutive");
		const Eigen::Vector3d rhs =
		    recs[i].h_matrix * deltas[i].vec() + recs[i].h_vector;
		const Eigen::Vector3d lhs = deltas[i + 1].vec();
		for (int c = 0; c < 3; ++c) {
			const double margin = rhs(c) + kSlack - lhs(c);
			report.min_margin = std::min(report.min_margin, margin);
			if (margin < 0.0)
				report.violations.push_back({recs[i].k, c, margin});
			++report.checked;
		}
	}
	return finalize(std::move(report));
}

AuditReport check_contraction(std::span<const ErrorVector> deltas,
                              std::span<const RecursionData> recs) {
	if (deltas.size() != recs.size() + 1)
		throw IterationMismatch("check_contraction: need one delta per k plus k+1");
	AuditReport report;
	report.min_margin = std::numeric_limits<double>::infinity();
	report.checked = 0;
	for (std::size_t i = 0; i < recs.size(); ++i) {
		const RecursionData& r = recs[i];
		const double spectral_margin = r.alpha - spectral_radius_3x3(r.h_hat);
		report.min_margin = std::min(report.min_margin, spectral_margin);
		if (spectral_margin <= 0.0)
			report.violations.push_back({r.k, -1, spectral_margin});
		const double rhs =
		    r.alpha * deltas[i].norm() + r.theta * r.gamma_cap + kSlack;
		const double margin = rhs - deltas[i + 1].norm();
		report.min_margin = std::min(report.min_margin, margin);
		if (margin < 0.0) report.violations.push_back({r.k, -1, margin});
		report.checked += 2;
	}
	return finalize(std::move(report));
}

double spectral_radius_3x3(const Eigen::Matrix3d& a) {
	// Characteristic polynomial lambda^3 - p2 lambda^2 + p1 lambda - p0.
	const double p2 = a.trace();
	const double p1 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) +
	                  a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
	                  a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
	const double p0 = a.determinant();

	// Depressed cubic t^3 + p t + q with lambda = t + p2/3.
	const double shift = p2 / 3.0;
	const double p = p1 - p2 * p2 / 3.0;
	const double q = -p0 + p1 * shift - 2.0 * shift * shift * shift;
	// (expansion of -(det) + ... ; equivalently q = f(shift) of the monic poly)
	const double disc = -4.0 * p * p * p - 27.0 * q * q;

	if (disc >= 0.0) {
		// Three real roots, trigonometric form.
		if (p >= 0.0) {
			// p == 0 and disc >= 0 forces q == 0: triple root at the shift.
			return std::abs(shift);
		}
		const double r = 2.0 * std::sqrt(-p / 3.0);
		double arg = 3.0 * q / (p * r);
		arg = std::clamp(arg, -1.0, 1.0);
		const double phi = std::acos(arg) / 3.0;
		double radius = 0.0;
		for (int j = 0; j < 3; ++j) {
			const double t =
			    r * std::cos(phi - 2.0 * std::numbers::pi * j / 3.0);
			radius = std::max(radius, std::abs(t + shift));
		}
		return radius;
	}

	// One real root (Cardano) and a complex pair.
	const double half_q = q / 2.0;
	const double s = std::sqrt(half_q * half_q + p * p * p / 27.0);
	const double u = std::cbrt(-half_q + s);
	const double v = std::cbrt(-half_q - s);
	const double t_real = u + v;
	// Conjugate pair: real part -t_real/2, |t|^2 = -q / t_real.
	const double real_root = std::abs(t_real + shift);
	if (t_real == 0.0) return real_root;
	const double mod2 = -q / t_real;
	const double re = -t_real / 2.0 + shift;
	const double im2 = std::max(0.0, mod2 - t_real * t_real / 4.0);
	return std::max(real_root, std::sqrt(re * re + im2));
}

namespace {

// Least-squares slope of y against k; NaN when fewer than 2 points.
double ls_slope(const std::vector<std::pair<double, double>>& pts) {
	if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
	double sx = 0, sy = 0, sxx = 0, sxy = 0;
	for (auto [x, y] : pts) {
		sx += x;
		sy += y;
		sxx += x * x;
		sxy += x * y;
	}
	const double n = static_cast<double>(pts.size());
	const double denom = n * sxx - sx * sx;
	if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
	return (n * sxy - sx * sy) / denom;
}

} // namespace

ConvergenceSummary summarize_convergence(const Trace& trace) {
	ConvergenceSummary s{};
	s.diverged = trace.diverged;
	s.diverged_k = trace.diverged_k;
	s.has_gap = trace.has_gap;
	s.has_delta = trace.has_delta;
	s.slopes_defined = trace.rows.size() >= 4;

	const double nan = std::numeric_limits<double>::quiet_NaN();
	s.final_log_ne_residual = nan;
	s.min_log_ne_residual = nan;
	s.slope_log_ne_residual = nan;
	s.final_log_relative_gap = nan;
	s.slope_log_relative_gap = nan;
	s.final_delta_norm = nan;
	s.slope_log_delta_norm = nan;
	if (trace.rows.empty()) {
		s.slopes_defined = false;
		return s;
	}

	const double gap0 =
	    trace.has_gap ? trace.rows.front().gap_to_xstar.value_or(nan) : nan;
	const std::size_t half = trace.rows.size() / 2;

	std::vector<std::pair<double, double>> res_pts, gap_pts, delta_pts;
	double min_log_res = std::numeric_limits<double>::infinity();
	for (std::size_t i = 0; i < trace.rows.size(); ++i) {
		const TraceRow& row = trace.rows[i];
		if (row.ne_residual > 0.0)
			min_log_res = std::min(min_log_res, std::log(row.ne_residual));
		if (i < half) continue;
		if (row.ne_residual > 0.0)
			res_pts.emplace_back(static_cast<double>(row.k), std::log(row.ne_residual));
		if (row.gap_to_xstar && *row.gap_to_xstar > 0.0 && gap0 > 0.0)
			gap_pts.emplace_back(static_cast<double>(row.k),
			                     std::log(*row.gap_to_xstar / gap0));
		if (row.delta_norm && *row.delta_norm > 0.0)
			delta_pts.emplace_back(static_cast<double>(row.k),
			                       std::log(*row.delta_norm));
	}

	const TraceRow& last = trace.rows.back();
	s.final_log_ne_residual =
	    last.ne_residual > 0.0 ? std::log(last.ne_residual)
	                           : -std::numeric_limits<double>::infinity();
	s.min_log_ne_residual = min_log_res;
	s.slope_log_ne_residual = ls_slope(res_pts);
	if (trace.has_gap && last.gap_to_xstar && gap0 > 0.0)
		s.final_log_relative_gap = std::log(*last.gap_to_xstar / gap0);
	s.slope_log_relative_gap = ls_slope(gap_pts);
	if (last.delta_norm) s.final_delta_norm = *last.delta_norm;
	s.slope_log_delta_norm = ls_slope(delta_pts);
	if (res_pts.size() < 2) s.slopes_defined = false;
	return s;
}

std::string AuditReport::describe() const {
	std::ostringstream os;
	os << (passed ? "passed" : "FAILED") << " (" << checked
	   << " checks, min margin " << min_margin;
	if (!violations.empty()) {
		os << ", " << violations.size() << " violations, first at k="
		   << violations.front().k << " component "
		   << violations.front().component;
	}
	os << ")";
	return os.str();
}

std::string ConvergenceSummary::describe() const {
	std::ostringstream os;
	if (diverged) {
		os << "diverged at k=" << diverged_k;
		return os.str();
	}
	os << "ln||F(x)||: final=" << final_log_ne_residual
	   << " min=" << min_log_ne_residual;
	if (slopes_defined)
		os << " slope=" << slope_log_ne_residual;
	else
		os << " slope=undefined";
	if (has_gap)
		os << "; ln(gap/gap0): final=" << final_log_relative_gap
		   << " slope=" << slope_log_relative_gap;
	if (has_delta)
		os << "; ||Delta||: final=" << final_delta_norm
		   << " log-slope=" << slope_log_delta_norm;
	return os.str();
}

WindowAudit audit_window(const QuadraticAggregativeGame& game,
                         const MixingMatrix& w, const StepSchedule& schedule,
                         const GameConstants& constants,
                         std::span<const SolverState> states, long k_end) {
	if (k_end < 1) throw ValidationError("audit window must end at k >= 1");
	if (static_cast<long>(states.size()) < k_end + 2)
		throw IterationMismatch("audit_window: need states for k = 0 .. k_end+1");

	// Trajectory points x*_{eta_k} for k = 0 .. k_end, and the gradient
	// bound C sampled over them.
	std::vector<RegularizedSolution> traj;
	traj.reserve(k_end + 1);
	double c_const = 0.0;
	for (long k = 0; k <= k_end; ++k) {
		traj.push_back(solve_regularized_vi_direct(game, schedule.eta(k)));
		c_const = std::max(c_const, social_gradient(game, traj.back().x).norm());
	}

	WindowAudit audit;
	audit.c_const = c_const;
	for (long k = 1; k <= k_end + 1; ++k)
		audit.deltas.push_back(
		    compute_delta(states[k], game, schedule, traj[k - 1]));
	for (long k = 1; k <= k_end; ++k)
		audit.recs.push_back(build_recursion(k, schedule, constants, w.rho(),
		                                     w.norm_w_minus_i(), c_const));
	audit.recursion = check_recursion(audit.deltas, audit.recs);
	audit.contraction = check_contraction(audit.deltas, audit.recs);
	return audit;
}

} // namespace aggne
