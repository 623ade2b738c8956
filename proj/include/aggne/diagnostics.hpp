#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "aggne/oracle.hpp"
#include "aggne/quadratic_game.hpp"
#include "aggne/solver.hpp"
#include "aggne/trace.hpp"

namespace aggne {

// The three convergence metrics at iteration k: distance to the Tikhonov
// trajectory point x*_{eta_{k-1}} and the two consensus violations.
struct ErrorVector {
	long k;
	double dist_trajectory;
	double consensus_v;
	double consensus_y;
	Eigen::Vector3d vec() const {
		return {dist_trajectory, consensus_v, consensus_y};
	}
	double norm() const { return vec().norm(); }
};

// Throws IterationMismatch when oracle_prev.eta != eta_{k-1}.
ErrorVector compute_delta(const SolverState& state, const AggregativeGame& game,
                          const StepSchedule& schedule,
                          const RegularizedSolution& oracle_prev);

// The per-iteration recursion and contraction data: Delta_{k+1} <=
// h_matrix * Delta_k + h_vector, the majorant h_hat, and the scalar
// contraction factor alpha = 1 - 0.5 gamma_k eta_k mu_g.
struct RecursionData {
	long k;
	Eigen::Matrix3d h_matrix;
	Eigen::Vector3d h_vector;
	Eigen::Matrix3d h_hat;
	double alpha;
	double theta;
	double gamma_cap;
	double c_const;
};

RecursionData build_recursion(long k, const StepSchedule& schedule,
                              const GameConstants& constants, double rho,
                              double norm_w_minus_i, double c_const);

struct AuditReport {
	struct Violation {
		long k;
		int component; // 0-based row of the recursion, -1 for scalar checks
		double margin; // negative means violated
	};
	std::vector<Violation> violations;
	double min_margin;
	long checked;
	bool passed;
	std::string describe() const;
};

// Component-wise Delta_{k+1} <= H_k Delta_k + h_k + 1e-8 over consecutive
// recorded ks. deltas must hold Delta_k for recs[i].k and one extra entry
// for the final k+1.
AuditReport check_recursion(std::span<const ErrorVector> deltas,
                            std::span<const RecursionData> recs);

// Spectral condition rho(H_hat_k) < alpha_k and the scalar contraction
// ||Delta_{k+1}|| <= alpha_k ||Delta_k|| + Theta Gamma_{k-1} + 1e-8.
AuditReport check_contraction(std::span<const ErrorVector> deltas,
                              std::span<const RecursionData> recs);

// Spectral radius of a 3x3 matrix from the exact characteristic cubic.
double spectral_radius_3x3(const Eigen::Matrix3d& a);

struct ConvergenceSummary {
	double final_log_ne_residual;
	double min_log_ne_residual;
	double slope_log_ne_residual; // least-squares slope over last half
	bool has_gap;
	double final_log_relative_gap;
	double slope_log_relative_gap;
	bool has_delta;
	double final_delta_norm;
	double slope_log_delta_norm;
	bool slopes_defined;
	bool diverged;
	long diverged_k;
	std::string describe() const;
};

ConvergenceSummary summarize_convergence(const Trace& trace);

// Full audit over a recorded window of states (k = 0 .. k_end + 1): solves
// the Tikhonov trajectory points, samples the gradient bound C, builds the
// recursion data and runs both checks.
struct WindowAudit {
	std::vector<ErrorVector> deltas;   // k = 1 .. k_end + 1
	std::vector<RecursionData> recs;   // k = 1 .. k_end
	double c_const;
	AuditReport recursion;
	AuditReport contraction;
};

WindowAudit audit_window(const QuadraticAggregativeGame& game,
                         const MixingMatrix& w, const StepSchedule& schedule,
                         const GameConstants& constants,
                         std::span<const SolverState> states, long k_end);

} // namespace aggne
