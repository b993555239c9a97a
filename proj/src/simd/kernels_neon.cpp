// AArch64 NEON variants; one complex value per float64x2_t.

#include <arm_neon.h>

#include "actlab/simd/kernels.hpp"

namespace actlab::simd {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx cdot_neon(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t rr = vdupq_n_f64(0.0);
  float64x2_t ri = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);
    const float64x2_t vb = vld1q_f64(pb + 2 * i);
    rr = vfmaq_f64(rr, va, vb);
    ri = vfmaq_f64(ri, va, vextq_f64(vb, vb, 1));
  }
  return {vgetq_lane_f64(rr, 0) - vgetq_lane_f64(rr, 1), vaddvq_f64(ri)};
}

void caxpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const float64x2_t vp = vdupq_n_f64(alpha.real());
  const float64x2_t vq = {-alpha.imag(), alpha.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(px + 2 * i);
    float64x2_t vy = vld1q_f64(py + 2 * i);
    vy = vfmaq_f64(vy, vp, vx);
    vy = vfmaq_f64(vy, vq, vextq_f64(vx, vx, 1));
    vst1q_f64(py + 2 * i, vy);
  }
}

void cmatvec_neon(const cplx* m, std::size_t rows, std::size_t cols,
                  const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = cdot_neon(m + r * cols, x, cols);
}

}  // namespace

namespace detail {
const KernelTable& neon_table() {
  static const KernelTable table{"neon", dot_neon, cdot_neon, caxpy_neon,
                                 cmatvec_neon};
  return table;
}
}  // namespace detail

}  // namespace actlab::simd
