#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace actlab::fft {

using cplx = std::complex<double>;

// Smallest n' >= n of the form 2^a 3^b 5^c.
std::size_t good_size(std::size_t n);

// Unnormalized complex DFT of length data.size(), in place.
// forward: X_k = sum_j x_j e^{-2 pi i jk/n}; backward uses e^{+...}.
void forward(std::span<cplx> data);
void backward(std::span<cplx> data);

// Real transform of length n. Inputs shorter than n are zero padded.
class RealTransform {
 public:
  explicit RealTransform(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out) const;
  // Normalized: inverse(forward(x)) == x.
  void inverse(std::span<const cplx> in, std::span<double> out) const;

 private:
  std::size_t n_;
};

// Linear convolution (length a.size() + b.size() - 1) via zero-padded FFT.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// Angular wavenumbers of the DFT bins for spacing dx: k_j = 2 pi j / (n dx)
// with j wrapped to [-n/2, n/2).
std::vector<double> wavenumbers(std::size_t n, double dx);

}  // namespace actlab::fft
