#include <cstdlib>
#include <string_view>

#include "actlab/simd/kernels.hpp"

namespace actlab::simd {

namespace detail {
#ifdef ACTLAB_HAVE_AVX2
const KernelTable& avx2_table();
#endif
#ifdef ACTLAB_HAVE_NEON
const KernelTable& neon_table();
#endif
}  // namespace detail

const KernelTable* avx2_kernels() {
#ifdef ACTLAB_HAVE_AVX2
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#ifdef ACTLAB_HAVE_NEON
  // Advanced SIMD is mandatory on AArch64.
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = neon_kernels()) out.push_back(t);
  return out;
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("ACTLAB_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar_kernels();
    const auto all = available();
    if (!want.empty()) {
      for (const auto* t : all)
        if (t->name == want) return t;
    }
    return all.back();
  }();
  return *chosen;
}

void cmatmul(const KernelTable& t, const cplx* a, const double* w,
             const cplx* b, cplx* c, std::size_t n, std::size_t k,
             std::size_t m) {
  for (std::size_t i = 0; i < n * m; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx* crow = c + i * m;
    const cplx* arow = a + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const cplx alpha = w ? arow[j] * w[j] : arow[j];
      if (alpha == cplx{}) continue;
      t.caxpy(alpha, b + j * m, crow, m);
    }
  }
}

}  // namespace actlab::simd
