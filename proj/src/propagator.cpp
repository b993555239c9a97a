#include "actlab/propagator.hpp"

#include <cmath>
#include <numbers>

#include "actlab/errors.hpp"
#include "actlab/fft.hpp"
#include "actlab/simd/kernels.hpp"

namespace actlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_compatible(const Kernel& a, const Kernel& b) {
  if (!a.grid().same_as(b.grid())) throw GridMismatchError("kernels live on different grids");
  if (std::abs(a.hbar() - b.hbar()) > 1e-12 * std::abs(a.hbar()))
    throw InvalidArgument("kernels carry different hbar");
}

double weighted_norm2(const SpatialGrid& grid, std::span<const cplx> v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += grid.weight(i) * std::norm(v[i]);
  return s;
}

}  // namespace

cplx character_eval(Character chi, double action) {
  const double ph = chi.eta * action;
  return {std::cos(ph), std::sin(ph)};
}

std::string to_string(KernelProvenance p) {
  switch (p) {
    case KernelProvenance::from_density: return "from-density";
    case KernelProvenance::analytic_short_time: return "analytic-short-time";
    case KernelProvenance::band_limited: return "band-limited-short-time";
    case KernelProvenance::composed: return "composed";
    case KernelProvenance::identity: return "identity";
  }
  return "unknown";
}

Kernel::Kernel(SpatialGrid grid, std::vector<cplx> entries, double duration, double hbar,
               KernelProvenance provenance)
    : grid_(std::move(grid)),
      entries_(std::move(entries)),
      duration_(duration),
      hbar_(hbar),
      provenance_(provenance) {
  if (entries_.size() != grid_.count() * grid_.count())
    throw GridMismatchError("kernel entries do not match grid");
  if (!(hbar_ > 0)) throw InvalidArgument("hbar must be positive");
  for (const auto& e : entries_)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw NumericalError("kernel has non-finite entries");
}

cplx kernel_value(const ActionDensity& g, double eta) {
  const auto& grid = g.grid();
  if (std::abs(eta) * grid.spacing() > kPi / 4 * (1 + 1e-12))
    throw UndersamplingError("action grid does not resolve the character phase (eta dA > pi/4)");
  const auto s = g.samples();
  std::vector<double> wc(s.size()), ws(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    wc[j] = grid.weight(j) * std::cos(eta * grid[j]);
    ws[j] = grid.weight(j) * std::sin(eta * grid[j]);
  }
  const auto& t = simd::active();
  return {t.dot(s.data(), wc.data(), s.size()), t.dot(s.data(), ws.data(), s.size())};
}

std::vector<cplx> kernel_from_density(const EndpointDensityField& field, double eta) {
  const auto& grid = field.grid();
  if (std::abs(eta) * grid.spacing() > kPi / 4 * (1 + 1e-12))
    throw UndersamplingError("action grid does not resolve the character phase (eta dA > pi/4)");
  const std::size_t n = grid.count();
  std::vector<double> wc(n), ws(n);
  for (std::size_t j = 0; j < n; ++j) {
    wc[j] = grid.weight(j) * std::cos(eta * grid[j]);
    ws[j] = grid.weight(j) * std::sin(eta * grid[j]);
  }
  const auto& t = simd::active();
  std::vector<cplx> out(field.size());
  for (std::size_t ib = 0; ib < field.size(); ++ib) {
    if (field.row_is_zero(ib)) continue;
    const auto r = field.row(ib);
    out[ib] = {t.dot(r.data(), wc.data(), n), t.dot(r.data(), ws.data(), n)};
  }
  return out;
}

Kernel kernel_from_fields(const FieldAt& builder, const SpatialGrid& grid, double eta,
                          double hbar) {
  const std::size_t n = grid.count();
  std::vector<cplx> entries(n * n);
  double duration = 0;
  for (std::size_t ia = 0; ia < n; ++ia) {
    const auto field = builder(grid[ia]);
    if (field.size() != n) throw GridMismatchError("field endpoints must be the grid points");
    duration = field.duration();
    const auto col = kernel_from_density(field, eta);
    for (std::size_t ib = 0; ib < n; ++ib) entries[ib * n + ia] = col[ib];
  }
  return Kernel(grid, std::move(entries), duration, hbar, KernelProvenance::from_density);
}

cplx short_time_normalization(double m, double hbar, double t) {
  if (t == 0) throw InvalidArgument("normalization undefined at t = 0");
  return std::sqrt(cplx(m, 0) / cplx(0, 2 * kPi * hbar * t));
}

cplx short_time_entry(const LagrangianSpec& lagrangian, double a, double b, double dt,
                      double hbar) {
  const double m = lagrangian.mass();
  const double d = b - a;
  const double phase = (m * d * d / (2 * dt) - lagrangian.potential(0.5 * (a + b)) * dt) / hbar;
  return short_time_normalization(m, hbar, dt) * std::polar(1.0, phase);
}

Kernel analytic_short_time(const LagrangianSpec& lagrangian, double dt, double hbar,
                           const SpatialGrid& grid) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  const std::size_t n = grid.count();
  std::vector<cplx> e(n * n);
  for (std::size_t ib = 0; ib < n; ++ib)
    for (std::size_t ia = 0; ia < n; ++ia)
      e[ib * n + ia] = short_time_entry(lagrangian, grid[ia], grid[ib], dt, hbar);
  return Kernel(grid, std::move(e), dt, hbar, KernelProvenance::analytic_short_time);
}

Kernel band_limited_short_time(const LagrangianSpec& lagrangian, double dt, double hbar,
                               const SpatialGrid& grid, double band_fraction) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (!(band_fraction > 0 && band_fraction <= 1))
    throw InvalidArgument("band fraction must lie in (0, 1]");
  const std::size_t n = grid.count();
  const double dx = grid.spacing();
  const double m = lagrangian.mass();
  const auto k = fft::wavenumbers(n, dx);
  const double k_cut = band_fraction * kPi / dx;
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(k[j]) <= k_cut * (1 + 1e-12))
      f[j] = std::polar(1.0, -hbar * k[j] * k[j] * dt / (2 * m));
  fft::backward(f);
  const double scale = 1.0 / (static_cast<double>(n) * dx);
  std::vector<cplx> e(n * n);
  for (std::size_t ib = 0; ib < n; ++ib) {
    for (std::size_t ia = 0; ia < n; ++ia) {
      const std::size_t d = (ib + n - ia) % n;
      const double v = lagrangian.potential(0.5 * (grid[ia] + grid[ib]));
      e[ib * n + ia] = scale * f[d] * std::polar(1.0, -v * dt / hbar);
    }
  }
  return Kernel(grid, std::move(e), dt, hbar, KernelProvenance::band_limited);
}

Kernel identity_kernel(const SpatialGrid& grid, double hbar) {
  const std::size_t n = grid.count();
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0 / grid.weight(i);
  return Kernel(grid, std::move(e), 0.0, hbar, KernelProvenance::identity);
}

std::vector<cplx> apply_weighted(const Kernel& k, std::span<const cplx> psi) {
  const std::size_t n = k.size();
  if (psi.size() != n) throw GridMismatchError("state does not match kernel grid");
  std::vector<cplx> wpsi(n), out(n);
  for (std::size_t i = 0; i < n; ++i) wpsi[i] = k.grid().weight(i) * psi[i];
  simd::active().cmatvec(k.entries().data(), n, n, wpsi.data(), out.data());
  return out;
}

std::vector<cplx> apply_adjoint(const Kernel& k, std::span<const cplx> phi) {
  const std::size_t n = k.size();
  if (phi.size() != n) throw GridMismatchError("state does not match kernel grid");
  std::vector<cplx> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    const cplx wb = k.grid().weight(b) * phi[b];
    for (std::size_t a = 0; a < n; ++a) out[a] += std::conj(k(b, a)) * wb;
  }
  return out;
}

Kernel compose_kernels(const Kernel& k2, const Kernel& k1) {
  require_compatible(k2, k1);
  const std::size_t n = k1.size();
  const auto w = k1.grid().weights();
  std::vector<cplx> c(n * n);
  simd::cmatmul(simd::active(), k2.entries().data(), w.data(), k1.entries().data(), c.data(),
                n, n, n);
  return Kernel(k1.grid(), std::move(c), k1.duration() + k2.duration(), k1.hbar(),
                KernelProvenance::composed);
}

std::vector<std::vector<cplx>> probe_packets(const SpatialGrid& grid, double hbar) {
  const double mid = 0.5 * (grid.min() + grid.max());
  const double L = grid.extent();
  const double width = L / 40;
  const double k_ny = kPi / grid.spacing();
  const double p_step = hbar * std::min(2.0, 0.05 * k_ny);
  std::vector<std::vector<cplx>> out;
  for (double c : {-0.1, 0.0, 0.1}) {
    for (double p : {-1.0, 0.0, 1.0}) {
      std::vector<cplx> psi(grid.count());
      for (std::size_t i = 0; i < grid.count(); ++i) {
        const double z = (grid[i] - mid - c * L) / width;
        psi[i] = std::polar(std::exp(-0.25 * z * z), p * p_step * grid[i] / hbar);
      }
      out.push_back(std::move(psi));
    }
  }
  return out;
}

double operator_relative_error(const Kernel& a, const Kernel& b,
                               const std::vector<std::vector<cplx>>& probes) {
  require_compatible(a, b);
  double num = 0, den = 0;
  for (const auto& p : probes) {
    const auto va = apply_weighted(a, p);
    const auto vb = apply_weighted(b, p);
    std::vector<cplx> d(va.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = va[i] - vb[i];
    num += weighted_norm2(a.grid(), d);
    den += weighted_norm2(a.grid(), vb);
  }
  if (!(den > 0)) throw NumericalError("reference kernel annihilates every probe");
  return std::sqrt(num / den);
}

double pointwise_relative_error(const Kernel& a, const Kernel& b) {
  require_compatible(a, b);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    num += std::norm(a.entries()[i] - b.entries()[i]);
    den += std::norm(b.entries()[i]);
  }
  if (!(den > 0)) throw NumericalError("reference kernel is zero");
  return std::sqrt(num / den);
}

CompletenessReport completeness_check(const Kernel& k) {
  return completeness_check(k, probe_packets(k.grid(), k.hbar()));
}

CompletenessReport completeness_check(const Kernel& k,
                                      const std::vector<std::vector<cplx>>& probes) {
  const std::size_t n = k.size();
  const auto& grid = k.grid();
  std::vector<cplx> adj(n * n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) adj[a * n + b] = std::conj(k(b, a));
  const auto w = grid.weights();
  std::vector<cplx> m(n * n);
  simd::cmatmul(simd::active(), adj.data(), w.data(), k.entries().data(), m.data(), n, n, n);
  double pointwise = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a) {
      const double delta = c == a ? 1.0 / grid.weight(a) : 0.0;
      pointwise = std::max(pointwise, std::abs(m[c * n + a] - delta));
    }

  double probe = 0;
  for (const auto& p : probes) {
    const auto back = apply_adjoint(k, apply_weighted(k, p));
    std::vector<cplx> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = back[i] - p[i];
    probe = std::max(probe, std::sqrt(weighted_norm2(grid, d) / weighted_norm2(grid, p)));
  }
  return {pointwise, probe};
}

double normalization_recursion_check(double m, double hbar, double dt) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  const cplx n1 = short_time_normalization(m, hbar, dt);
  const cplx n2 = short_time_normalization(m, hbar, 2 * dt);
  const cplx factor = std::sqrt(cplx(0, kPi * hbar * dt / m));
  return std::abs(n2 - n1 * n1 * factor) / std::abs(n2);
}

}  // namespace actlab
