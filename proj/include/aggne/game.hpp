#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace aggne {

struct GameDims {
	int n_players; // N
	int dim;       // m, per-player decision dimension
};

// Lipschitz/strong-convexity parameters feeding the step-size safe bound
// and the convergence diagnostics.
struct GameConstants {
	double l_f;  // Lipschitz constant of F and of the stacked two-argument f-map
	double l_1;  // same for the g-side maps
	double l_2;  // Lipschitz constant of the stacked second-argument g-gradient
	double mu_g; // strong-convexity modulus of the social cost
};

// Aggregative game through per-player partial-gradient callbacks.
// Each callback maps (player i, own decision x_i, aggregate estimate y)
// to a vector in R^m written into `out`. Players never see the full
// decision profile, only their own block and an aggregate estimate.
// Implementations must be pure and deterministic.
class AggregativeGame {
 public:
	virtual ~AggregativeGame() = default;

	GameDims dims() const { return dims_; }

	virtual void grad1_f(int i, std::span<const double> xi,
	                     std::span<const double> y,
	                     std::span<double> out) const = 0;
	virtual void grad2_f(int i, std::span<const double> xi,
	                     std::span<const double> y,
	                     std::span<double> out) const = 0;
	virtual void grad1_g(int i, std::span<const double> xi,
	                     std::span<const double> y,
	                     std::span<double> out) const = 0;
	virtual void grad2_g(int i, std::span<const double> xi,
	                     std::span<const double> y,
	                     std::span<double> out) const = 0;

	// Scalar evaluators for finite-difference checks; optional.
	virtual bool has_scalar_costs() const { return false; }
	virtual double f(int i, std::span<const double> xi,
	                 std::span<const double> y) const;
	virtual double g(int i, std::span<const double> xi,
	                 std::span<const double> y) const;

 protected:
	explicit AggregativeGame(GameDims dims);

 private:
	GameDims dims_;
};

// Stacked pseudo-gradient F(x): per player, grad1_f + (1/N) grad2_f
// evaluated at the true aggregate of x. Zeros of F are exactly the Nash
// equilibria on an unconstrained domain.
Eigen::VectorXd pseudo_gradient(const AggregativeGame& game,
                                const Eigen::VectorXd& x);

// Full gradient of the social cost g: per player,
// grad1_g(i, x_i, xbar) + (1/N) sum_j grad2_g(j, x_j, xbar).
Eigen::VectorXd social_gradient(const AggregativeGame& game,
                                const Eigen::VectorXd& x);

struct GradientCheckReport {
	struct CallbackResult {
		std::string name;
		double max_rel_deviation;
	};
	std::vector<CallbackResult> callbacks;
	int trials;
	bool passed;
};

// Central finite differences of the scalar costs against the gradient
// callbacks, 1e-5 relative tolerance. Throws GradientMismatch on failure.
GradientCheckReport check_gradients(const AggregativeGame& game, int trials,
                                    std::uint64_t seed);

} // namespace aggne
