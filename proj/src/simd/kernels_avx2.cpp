// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after a
// runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "actlab/simd/kernels.hpp"

namespace actlab::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Two complex values per register: [re0, im0, re1, im1].
cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d rr = _mm256_setzero_pd();  // [ar*br, ai*bi, ...]
  __m256d ri = _mm256_setzero_pd();  // [ar*bi, ai*br, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    rr = _mm256_fmadd_pd(va, vb, rr);
    ri = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), ri);
  }
  alignas(32) double r[4], q[4];
  _mm256_store_pd(r, rr);
  _mm256_store_pd(q, ri);
  double re = (r[0] + r[2]) - (r[1] + r[3]);
  double im = (q[0] + q[1]) + (q[2] + q[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d vp = _mm256_set1_pd(alpha.real());
  const __m256d vq = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d t = _mm256_mul_pd(_mm256_permute_pd(vx, 0b0101), vq);
    // even lanes: p*xr - q*xi, odd lanes: p*xi + q*xr
    const __m256d prod = _mm256_fmaddsub_pd(vp, vx, t);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
  }
  const double p = alpha.real(), q = alpha.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + p * xr - q * xi, y[i].imag() + p * xi + q * xr};
  }
}

void cmatvec_avx2(const cplx* m, std::size_t rows, std::size_t cols,
                  const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = cdot_avx2(m + r * cols, x, cols);
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", dot_avx2, cdot_avx2, caxpy_avx2,
                                 cmatvec_avx2};
  return table;
}
}  // namespace detail

}  // namespace actlab::simd
