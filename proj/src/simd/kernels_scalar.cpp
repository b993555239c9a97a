#include "actlab/simd/kernels.hpp"

namespace actlab::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

void caxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + p * xr - q * xi, y[i].imag() + p * xi + q * xr};
  }
}

void cmatvec_scalar(const cplx* m, std::size_t rows, std::size_t cols,
                    const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = cdot_scalar(m + r * cols, x, cols);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot_scalar, cdot_scalar, caxpy_scalar,
                                 cmatvec_scalar};
  return table;
}

}  // namespace actlab::simd
