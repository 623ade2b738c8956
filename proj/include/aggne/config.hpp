#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aggne/solver.hpp"

namespace aggne {

// game: {"builtin": "ev_paper"} or {"quadratic": {...}}
struct BuiltinGameSpec {
	std::string name; // only "ev_paper"
};

struct QuadraticGameSpec {
	int n = 0;
	int m = 0;
	Eigen::VectorXd d;
	Eigen::MatrixXd c1;
	Eigen::VectorXd b1;
	Eigen::MatrixXd u;
	std::vector<Eigen::MatrixXd> c2;
	Eigen::VectorXd b2;
};

using GameSpec = std::variant<BuiltinGameSpec, QuadraticGameSpec>;

// graph: "complete", {"edges": {...}}, or {"random": {...}}
struct CompleteGraphSpec {};

struct EdgeListGraphSpec {
	int n = 0;
	std::vector<std::pair<int, int>> edges;
};

struct RandomGraphSpec {
	int n = 0;
	double edge_prob = 0.0;
	std::uint64_t seed = 0;
};

using GraphSpec =
    std::variant<CompleteGraphSpec, EdgeListGraphSpec, RandomGraphSpec>;

struct DiagnosticsSpec {
	bool enabled = false;
	long window_end = 200;
	// Scales L_F before the audit; values != 1 are a negative control that
	// should surface recursion violations.
	double lf_scale = 1.0;
};

struct ExperimentConfig {
	GameSpec game;
	GraphSpec graph;
	StepSchedule schedule{};
	std::optional<Eigen::VectorXd> x0; // nullopt = zeros
	long max_iters = 0;
	long record_every = 100;
	bool attach_oracle = false;
	DiagnosticsSpec diagnostics;
	bool allow_unsafe_gamma0 = false;
	std::string output_path = "trace.csv";
};

// Strict JSON parsing: unknown keys are rejected, defaults applied,
// invariants validated. Throws ParseError / ValidationError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical serialization; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const ExperimentConfig& config);

// FNV-1a hash of the canonical serialization.
std::string config_hash(const ExperimentConfig& config);

} // namespace aggne
