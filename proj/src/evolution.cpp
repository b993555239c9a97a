#include "actlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actlab/errors.hpp"
#include "actlab/fft.hpp"
#include "actlab/simd/kernels.hpp"

namespace actlab {

namespace {

constexpr double kPi = std::numbers::pi;

double out_of_band(const SpatialGrid& grid, std::span<const cplx> psi) {
  std::vector<cplx> f(psi.begin(), psi.end());
  fft::forward(f);
  const auto k = fft::wavenumbers(grid.count(), grid.spacing());
  const double cut = kBandFraction * kPi / grid.spacing();
  double total = 0, outside = 0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double p = std::norm(f[j]);
    total += p;
    if (std::abs(k[j]) > cut) outside += p;
  }
  return total > 0 ? outside / total : 0.0;
}

double weighted_norm2(const SpatialGrid& grid, std::span<const cplx> v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += grid.weight(i) * std::norm(v[i]);
  return s;
}

cplx weighted_inner(const SpatialGrid& grid, std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += grid.weight(i) * std::conj(a[i]) * b[i];
  return s;
}

std::vector<cplx> spectral_multiply(const SpatialGrid& grid, std::span<const cplx> psi,
                                    int order) {
  const std::size_t n = grid.count();
  if (psi.size() != n) throw GridMismatchError("state does not match grid");
  std::vector<cplx> f(psi.begin(), psi.end());
  fft::forward(f);
  const auto k = fft::wavenumbers(n, grid.spacing());
  const bool even = n % 2 == 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (order == 1) {
      // The Nyquist bin of an even-length transform has no odd partner.
      f[j] *= (even && j == n / 2) ? cplx{} : cplx(0, k[j]);
    } else {
      f[j] *= -k[j] * k[j];
    }
  }
  fft::backward(f);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : f) v *= scale;
  return f;
}

}  // namespace

WaveFunction::WaveFunction(SpatialGrid grid, std::vector<cplx> samples, double hbar, double time)
    : grid_(std::move(grid)), samples_(std::move(samples)), hbar_(hbar), time_(time) {
  if (samples_.size() != grid_.count()) throw GridMismatchError("state does not match grid");
  if (!(hbar_ > 0)) throw InvalidArgument("hbar must be positive");
  for (const auto& v : samples_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("state has non-finite samples");
  band_limited_ = out_of_band(grid_, samples_) <= 1e-10;
}

double WaveFunction::norm() const { return weighted_norm2(grid_, samples_); }

double WaveFunction::out_of_band_fraction() const { return out_of_band(grid_, samples_); }

WaveFunction WaveFunction::scaled(cplx factor) const {
  std::vector<cplx> s(samples_);
  for (auto& v : s) v *= factor;
  return WaveFunction(grid_, std::move(s), hbar_, time_);
}

WaveFunction combine(cplx alpha, const WaveFunction& psi1, cplx beta, const WaveFunction& psi2) {
  if (!psi1.grid().same_as(psi2.grid())) throw GridMismatchError("states on different grids");
  std::vector<cplx> s(psi1.samples().size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = alpha * psi1.samples()[i] + beta * psi2.samples()[i];
  return WaveFunction(psi1.grid(), std::move(s), psi1.hbar(), psi1.time());
}

WaveFunction apply_kernel(const Kernel& k, const WaveFunction& psi) {
  if (!k.grid().same_as(psi.grid())) throw GridMismatchError("kernel and state grids differ");
  if (std::abs(k.hbar() - psi.hbar()) > 1e-12 * psi.hbar())
    throw InvalidArgument("kernel and state carry different hbar");
  return WaveFunction(psi.grid(), apply_weighted(k, psi.samples()), psi.hbar(),
                      psi.time() + k.duration());
}

EvolutionTrace evolve(const Kernel& k, const WaveFunction& psi0, int steps,
                      const EvolveOptions& opts) {
  if (steps < 1) throw InvalidArgument("need at least one step");
  EvolutionTrace trace;
  trace.dt = k.duration();
  trace.snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  trace.snapshots.push_back(psi0);
  const double n0 = psi0.norm();
  if (!(n0 > 0)) throw InvalidArgument("initial state has zero norm");
  trace.norms.push_back(n0);
  if (!psi0.band_limited()) ++trace.band_limit_warnings;
  for (int s = 1; s <= steps; ++s) {
    WaveFunction next = apply_kernel(k, trace.snapshots.back());
    const double nrm = next.norm();
    if (!(std::abs(nrm / n0 - 1) <= opts.max_norm_drift))
      throw NormDriftError("norm drift exceeded the evolution limit", s, nrm);
    if (!next.band_limited()) ++trace.band_limit_warnings;
    trace.norms.push_back(nrm);
    trace.snapshots.push_back(std::move(next));
  }
  trace.residuals.assign(trace.snapshots.size(), std::numeric_limits<double>::quiet_NaN());
  return trace;
}

std::vector<cplx> spectral_derivative(const SpatialGrid& grid, std::span<const cplx> psi) {
  return spectral_multiply(grid, psi, 1);
}

std::vector<cplx> spectral_second_derivative(const SpatialGrid& grid, std::span<const cplx> psi) {
  return spectral_multiply(grid, psi, 2);
}

std::vector<cplx> apply_hamiltonian(const WaveFunction& psi, const LagrangianSpec& lagrangian) {
  const auto& grid = psi.grid();
  auto h = spectral_second_derivative(grid, psi.samples());
  const double c = -psi.hbar() * psi.hbar() / (2 * lagrangian.mass());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = c * h[i] + lagrangian.potential(grid[i]) * psi.samples()[i];
  return h;
}

std::vector<double> schrodinger_residual(EvolutionTrace& trace, const LagrangianSpec& lagrangian) {
  const auto& snaps = trace.snapshots;
  if (snaps.size() < 3) throw InvalidArgument("residual needs at least three snapshots");
  const double dt = trace.dt;
  std::vector<double> res(snaps.size(), std::numeric_limits<double>::quiet_NaN());
  const auto& grid = snaps.front().grid();
  for (std::size_t n = 1; n + 1 < snaps.size(); ++n) {
    const double hb = snaps[n].hbar();
    const auto hpsi = apply_hamiltonian(snaps[n], lagrangian);
    std::vector<cplx> d(hpsi.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const cplx lhs = cplx(0, hb) * (snaps[n + 1].samples()[i] - snaps[n - 1].samples()[i]) /
                       (2 * dt);
      d[i] = lhs - hpsi[i];
    }
    const double den = weighted_norm2(grid, hpsi);
    res[n] = den > 0 ? std::sqrt(weighted_norm2(grid, d) / den)
                     : std::sqrt(weighted_norm2(grid, d));
  }
  trace.residuals = res;
  return res;
}

Expectations expectations(const WaveFunction& psi, const LagrangianSpec& lagrangian) {
  const auto& grid = psi.grid();
  const auto s = psi.samples();
  const double nrm = psi.norm();
  if (!(nrm > 0)) throw InvalidArgument("expectations of a zero state");
  std::vector<cplx> xpsi(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) xpsi[i] = grid[i] * s[i];
  auto dpsi = spectral_derivative(grid, s);
  for (auto& v : dpsi) v *= cplx(0, -psi.hbar());
  const auto hpsi = apply_hamiltonian(psi, lagrangian);
  return {weighted_inner(grid, s, xpsi).real() / nrm, weighted_inner(grid, s, dpsi).real() / nrm,
          weighted_inner(grid, s, hpsi).real() / nrm};
}

GaussianIntegralResult gaussian_integral_check(double m, double hbar, double dt,
                                               const GaussianIntegralOptions& opts) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (opts.points < 3) throw InvalidArgument("need at least three quadrature points");
  // Along y = e^{i pi/4} s the integrand e^{i m y^2 / (2 hbar dt)} becomes
  // the real Gaussian e^{-s^2 / (2 sd^2)} with sd^2 = hbar dt / m.
  const double sd = std::sqrt(hbar * dt / m);
  const double half = opts.half_width_sigmas * sd;
  const double h = 2 * half / static_cast<double>(opts.points - 1);
  double i0 = 0, i2 = 0;
  for (std::size_t j = 0; j < opts.points; ++j) {
    const double s = -half + static_cast<double>(j) * h;
    const double w = (j == 0 || j + 1 == opts.points) ? 0.5 * h : h;
    const double g = std::exp(-0.5 * s * s / (sd * sd));
    i0 += w * g;
    i2 += w * s * s * g;
  }
  const cplx jac = std::polar(1.0, kPi / 4);  // dy = e^{i pi/4} ds
  const cplx nrm = short_time_normalization(m, hbar, dt);
  GaussianIntegralResult r;
  r.zeroth = nrm * jac * i0;
  r.second = nrm * jac * cplx(0, 1) * i2;  // y^2 = i s^2
  const double scale = hbar * dt / m;
  r.residual_zeroth = std::abs(r.zeroth - 1.0);
  r.residual_second = std::abs(r.second - cplx(0, scale)) / scale;
  r.truncation = std::exp(-0.5 * opts.half_width_sigmas * opts.half_width_sigmas);
  r.truncation_ok = r.truncation < 1e-14;
  return r;
}

cplx gaussian_integral_real_axis(double m, double hbar, double dt, double half_width,
                                 std::size_t points) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (points < 3) throw InvalidArgument("need at least three quadrature points");
  const double h = 2 * half_width / static_cast<double>(points - 1);
  cplx sum = 0;
  for (std::size_t j = 0; j < points; ++j) {
    const double y = -half_width + static_cast<double>(j) * h;
    const double w = (j == 0 || j + 1 == points) ? 0.5 * h : h;
    sum += w * std::polar(1.0, m * y * y / (2 * hbar * dt));
  }
  return short_time_normalization(m, hbar, dt) * sum;
}

CommutatorResult commutator_check(const WaveFunction& psi) {
  const auto& grid = psi.grid();
  const auto s = psi.samples();
  double peak = 0;
  for (const auto& v : s) peak = std::max(peak, std::abs(v));
  if (peak == 0) return {0.0, true};
  if (std::max(std::abs(s.front()), std::abs(s.back())) > 1e-10 * peak)
    throw InvalidArgument("state does not vanish at the grid boundary");
  const double hb = psi.hbar();
  const double centre = 0.5 * (grid.min() + grid.max());
  std::vector<cplx> xpsi(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) xpsi[i] = (grid[i] - centre) * s[i];
  const auto dpsi = spectral_derivative(grid, s);
  const auto dxpsi = spectral_derivative(grid, xpsi);
  double worst = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = grid[i] - centre;
    // x p psi - p x psi with p = -i hbar d/dx
    const cplx comm = cplx(0, -hb) * x * dpsi[i] - cplx(0, -hb) * dxpsi[i];
    worst = std::max(worst, std::abs(comm - cplx(0, hb) * s[i]));
  }
  return {worst / peak, false};
}

}  // namespace actlab
