#include "aggne/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace aggne::kernels {
namespace {

const Ops* select() {
	const char* req = std::getenv("AGGNE_KERNELS");
	if (req != nullptr) {
		if (std::strcmp(req, "scalar") == 0) return &scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
		if (std::strcmp(req, "avx2") == 0 && __builtin_cpu_supports("avx2"))
			return &avx2_ops();
#endif
#if defined(__aarch64__)
		if (std::strcmp(req, "neon") == 0) return &neon_ops();
#endif
		std::fprintf(stderr,
		             "aggne: kernel variant '%s' unavailable, using scalar\n",
		             req);
		return &scalar_ops();
	}
#if defined(__x86_64__) || defined(_M_X64)
	if (__builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
#if defined(__aarch64__)
	return &neon_ops();
#endif
	return &scalar_ops();
}

} // namespace

const Ops& active() {
	static const Ops* ops = select();
	return *ops;
}

} // namespace aggne::kernels
