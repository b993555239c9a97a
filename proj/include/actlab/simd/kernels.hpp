#pragma once

// Data-parallel inner loops shared by the quadrature, kernel-application and
// kernel-composition paths. Every variant implements the same table; the
// scalar table is the reference the vector variants are tested against.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace actlab::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // sum_i a[i] * b[i], complex, no conjugation
  cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);

  // y[i] += alpha * x[i]
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);

  // y = M x for a row-major rows x cols matrix
  void (*cmatvec)(const cplx* m, std::size_t rows, std::size_t cols,
                  const cplx* x, cplx* y);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best table for this CPU, chosen once. ACTLAB_SIMD=scalar|avx2|neon overrides.
const KernelTable& active();

std::vector<const KernelTable*> available();

// C = A * diag(w) * B with A (n x k), B (k x m), C (n x m), all row-major.
// Pass an empty w for plain A*B.
void cmatmul(const KernelTable& t, const cplx* a, const double* w,
             const cplx* b, cplx* c, std::size_t n, std::size_t k,
             std::size_t m);

}  // namespace actlab::simd
