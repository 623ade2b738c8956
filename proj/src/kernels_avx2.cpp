#include "aggne/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// Explicit mul + add throughout (no FMA): keeps every lane's arithmetic
// identical to the scalar reference, so equivalence tests can require
// bit-exact agreement for the order-preserving kernels.

namespace aggne::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
	const __m256d va = _mm256_set1_pd(a);
	std::size_t i = 0;
	for (; i + 4 <= n; i += 4) {
		__m256d vy = _mm256_loadu_pd(y + i);
		__m256d vx = _mm256_loadu_pd(x + i);
		vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
		_mm256_storeu_pd(y + i, vy);
	}
	for (; i < n; ++i) y[i] += a * x[i];
}

void combine(const double* x, double a, const double* y, double* out,
             std::size_t n) {
	const __m256d va = _mm256_set1_pd(a);
	std::size_t i = 0;
	for (; i + 4 <= n; i += 4) {
		__m256d vx = _mm256_loadu_pd(x + i);
		__m256d vy = _mm256_loadu_pd(y + i);
		_mm256_storeu_pd(out + i, _mm256_add_pd(vx, _mm256_mul_pd(va, vy)));
	}
	for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
	std::size_t i = 0;
	for (; i + 4 <= n; i += 4) {
		_mm256_storeu_pd(out + i,
		                 _mm256_sub_pd(_mm256_loadu_pd(a + i),
		                               _mm256_loadu_pd(b + i)));
	}
	for (; i < n; ++i) out[i] = a[i] - b[i];
}

double sumsq(const double* x, std::size_t n) {
	__m256d acc = _mm256_setzero_pd();
	std::size_t i = 0;
	for (; i + 4 <= n; i += 4) {
		__m256d vx = _mm256_loadu_pd(x + i);
		acc = _mm256_add_pd(acc, _mm256_mul_pd(vx, vx));
	}
	alignas(32) double lanes[4];
	_mm256_store_pd(lanes, acc);
	double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
	for (; i < n; ++i) s += x[i] * x[i];
	return s;
}

// Vectorized across coordinates; the neighbor sum over j stays in
// ascending order exactly as in the scalar kernel.
void mix_rows(const double* w, const double* v, double* out, int n, int m) {
	for (int i = 0; i < n; ++i) {
		double* oi = out + static_cast<std::size_t>(i) * m;
		const double* wi = w + static_cast<std::size_t>(i) * n;
		int c = 0;
		for (; c + 4 <= m; c += 4) {
			__m256d acc = _mm256_setzero_pd();
			for (int j = 0; j < n; ++j) {
				const __m256d wij = _mm256_set1_pd(wi[j]);
				const double* vj = v + static_cast<std::size_t>(j) * m;
				acc = _mm256_add_pd(acc, _mm256_mul_pd(wij, _mm256_loadu_pd(vj + c)));
			}
			_mm256_storeu_pd(oi + c, acc);
		}
		for (; c < m; ++c) {
			double s = 0.0;
			for (int j = 0; j < n; ++j)
				s += wi[j] * v[static_cast<std::size_t>(j) * m + c];
			oi[c] = s;
		}
	}
}

} // namespace

const Ops& avx2_ops() {
	static const Ops ops{"avx2", axpy, combine, sub, sumsq, mix_rows};
	return ops;
}

} // namespace aggne::kernels

#endif
