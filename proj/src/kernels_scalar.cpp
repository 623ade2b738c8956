#include "aggne/kernels.hpp"

namespace aggne::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
	for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void combine(const double* x, double a, const double* y, double* out,
             std::size_t n) {
	for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
	for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

double sumsq(const double* x, std::size_t n) {
	double s = 0.0;
	for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
	return s;
}

void mix_rows(const double* w, const double* v, double* out, int n, int m) {
	for (int i = 0; i < n; ++i) {
		double* oi = out + static_cast<std::size_t>(i) * m;
		for (int c = 0; c < m; ++c) oi[c] = 0.0;
		const double* wi = w + static_cast<std::size_t>(i) * n;
		for (int j = 0; j < n; ++j) {
			const double wij = wi[j];
			const double* vj = v + static_cast<std::size_t>(j) * m;
			for (int c = 0; c < m; ++c) oi[c] += wij * vj[c];
		}
	}
}

} // namespace

const Ops& scalar_ops() {
	static const Ops ops{"scalar", axpy, combine, sub, sumsq, mix_rows};
	return ops;
}

} // namespace aggne::kernels
