#include "aggne/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// Mirrors the AVX2 variant with 2-wide double lanes; mul + add only so the
// order-preserving kernels stay bit-identical to the scalar reference.

namespace aggne::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
	const float64x2_t va = vdupq_n_f64(a);
	std::size_t i = 0;
	for (; i + 2 <= n; i += 2) {
		float64x2_t vy = vld1q_f64(y + i);
		vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
		vst1q_f64(y + i, vy);
	}
	for (; i < n; ++i) y[i] += a * x[i];
}

void combine(const double* x, double a, const double* y, double* out,
             std::size_t n) {
	const float64x2_t va = vdupq_n_f64(a);
	std::size_t i = 0;
	for (; i + 2 <= n; i += 2) {
		float64x2_t v = vaddq_f64(vld1q_f64(x + i),
		                          vmulq_f64(va, vld1q_f64(y + i)));
		vst1q_f64(out + i, v);
	}
	for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
	std::size_t i = 0;
	for (; i + 2 <= n; i += 2)
		vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
	for (; i < n; ++i) out[i] = a[i] - b[i];
}

double sumsq(const double* x, std::size_t n) {
	float64x2_t acc = vdupq_n_f64(0.0);
	std::size_t i = 0;
	for (; i + 2 <= n; i += 2) {
		float64x2_t vx = vld1q_f64(x + i);
		acc = vaddq_f64(acc, vmulq_f64(vx, vx));
	}
	double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
	for (; i < n; ++i) s += x[i] * x[i];
	return s;
}

void mix_rows(const double* w, const double* v, double* out, int n, int m) {
	for (int i = 0; i < n; ++i) {
		double* oi = out + static_cast<std::size_t>(i) * m;
		const double* wi = w + static_cast<std::size_t>(i) * n;
		int c = 0;
		for (; c + 2 <= m; c += 2) {
			float64x2_t acc = vdupq_n_f64(0.0);
			for (int j = 0; j < n; ++j) {
				const float64x2_t wij = vdupq_n_f64(wi[j]);
				const double* vj = v + static_cast<std::size_t>(j) * m;
				acc = vaddq_f64(acc, vmulq_f64(wij, vld1q_f64(vj + c)));
			}
			vst1q_f64(oi + c, acc);
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

const Ops& neon_ops() {
	static const Ops ops{"neon", axpy, combine, sub, sumsq, mix_rows};
	return ops;
}

} // namespace aggne::kernels

#endif
