#include "actlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "actlab/errors.hpp"

namespace actlab::fft {

namespace {

enum class Kind { c2c_fwd, c2c_bwd, r2c, c2r };

// FFTW planning is not thread-safe; plans are created once per (kind, n) and
// executed through the new-array interface, which is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::c2c_fwd:
      case Kind::c2c_bwd: {
        auto* buf = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(len, buf, buf,
                                kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD,
                                flags);
        fftw_free(buf);
        break;
      }
      case Kind::r2c: {
        auto* in = fftw_alloc_real(n);
        auto* out = fftw_alloc_complex(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(len, in, out, flags);
        fftw_free(in);
        fftw_free(out);
        break;
      }
      case Kind::c2r: {
        auto* in = fftw_alloc_complex(n / 2 + 1);
        auto* out = fftw_alloc_real(n);
        plan = fftw_plan_dft_c2r_1d(len, in, out, flags | FFTW_DESTROY_INPUT);
        fftw_free(in);
        fftw_free(out);
        break;
      }
    }
    if (!plan) throw NumericalError("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

void forward(std::span<cplx> data) {
  if (data.empty()) return;
  fftw_execute_dft(cache().get(Kind::c2c_fwd, data.size()), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void backward(std::span<cplx> data) {
  if (data.empty()) return;
  fftw_execute_dft(cache().get(Kind::c2c_bwd, data.size()), as_fftw(data.data()),
                   as_fftw(data.data()));
}

RealTransform::RealTransform(std::size_t n) : n_(n) {
  if (n < 2) throw InvalidArgument("real transform needs n >= 2");
  cache().get(Kind::r2c, n);
  cache().get(Kind::c2r, n);
}

void RealTransform::forward(std::span<const double> in, std::span<cplx> out) const {
  if (in.size() > n_ || out.size() != spectrum_size())
    throw InvalidArgument("real transform buffer size mismatch");
  std::vector<double> buf(n_, 0.0);
  std::copy(in.begin(), in.end(), buf.begin());
  fftw_execute_dft_r2c(cache().get(Kind::r2c, n_), buf.data(), as_fftw(out.data()));
}

void RealTransform::inverse(std::span<const cplx> in, std::span<double> out) const {
  if (in.size() != spectrum_size() || out.size() != n_)
    throw InvalidArgument("real transform buffer size mismatch");
  std::vector<cplx> buf(in.begin(), in.end());
  fftw_execute_dft_c2r(cache().get(Kind::c2r, n_), as_fftw(buf.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= scale;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  const RealTransform t(good_size(std::max<std::size_t>(len, 2)));
  std::vector<cplx> fa(t.spectrum_size()), fb(t.spectrum_size());
  t.forward(a, fa);
  t.forward(b, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> full(t.size());
  t.inverse(fa, full);
  full.resize(len);
  return full;
}

std::vector<double> wavenumbers(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<long>(j);
    const long wrapped = jj < static_cast<long>((n + 1) / 2) ? jj : jj - static_cast<long>(n);
    k[j] = base * static_cast<double>(wrapped);
  }
  return k;
}

}  // namespace actlab::fft
