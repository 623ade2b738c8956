#pragma once

#include <stdexcept>
#include <string>

namespace aggne {

struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// graph
struct DisconnectedGraph : Error { using Error::Error; };
struct NotStochastic : Error { using Error::Error; };

// game
struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotStronglyConvex : Error { using Error::Error; };
struct GradientMismatch : Error { using Error::Error; };

// solver
struct NonFiniteValue : Error {
	NonFiniteValue(long k_, const std::string& what)
		: Error(what), k(k_) {}
	long k;
};
struct DegenerateSpectralGap : Error { using Error::Error; };

// oracle
struct NoConvergence : Error { using Error::Error; };
struct SingularKKT : Error { using Error::Error; };

// diagnostics
struct IterationMismatch : Error { using Error::Error; };
struct RecursionViolated : Error { using Error::Error; };
struct ContractionViolated : Error { using Error::Error; };

// cli
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace aggne
