#pragma once

#include <cstddef>
#include <string>

namespace aggne::kernels {

// Flat-array kernels backing the solver's per-iteration updates.
//
// All variants of a kernel must produce bit-identical results: the SIMD
// implementations vectorize across independent coordinates and keep the
// same accumulation order as the scalar reference (no FMA contraction).
// The one exception is sumsq, whose lane-wise partial sums reassociate
// the reduction; callers treat it as an approximate norm.
struct Ops {
	const char* name;
	// y[i] += a * x[i]
	void (*axpy)(double a, const double* x, double* y, std::size_t n);
	// out[i] = x[i] + a * y[i]
	void (*combine)(const double* x, double a, const double* y, double* out,
	                std::size_t n);
	// out[i] = a[i] - b[i]
	void (*sub)(const double* a, const double* b, double* out, std::size_t n);
	// sum of squares
	double (*sumsq)(const double* x, std::size_t n);
	// Gossip step on agent-stacked storage: out block i (length m) =
	// sum_j w[i*n + j] * v block j, ascending j. out must not alias v.
	void (*mix_rows)(const double* w, const double* v, double* out, int n,
	                 int m);
};

const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

// Runtime-selected variant. Honors AGGNE_KERNELS=scalar|avx2|neon (falls
// back to scalar with a warning if the requested variant is unavailable).
const Ops& active();

} // namespace aggne::kernels
