#include "actlab/reference.hpp"

#include <cmath>
#include <numbers>

namespace actlab {

using cplx = std::complex<double>;

cplx free_packet(const PacketParams& p, double x, double t) {
  const double s2 = p.sigma0 * p.sigma0;
  const cplx alpha(1.0, p.hbar * t / (2 * p.m * s2));
  const double k0 = p.p0 / p.hbar;
  const double v = p.p0 / p.m;
  const double dx = x - p.x0 - v * t;
  const double pref = std::pow(2 * std::numbers::pi * s2, -0.25);
  const cplx expo = -dx * dx / (4 * s2 * alpha) +
                    cplx(0, k0 * (x - p.x0) - p.hbar * k0 * k0 * t / (2 * p.m));
  return pref / std::sqrt(alpha) * std::exp(expo);
}

std::vector<cplx> free_packet(const PacketParams& p, const SpatialGrid& grid, double t) {
  std::vector<cplx> out(grid.count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = free_packet(p, grid[i], t);
  return out;
}

double coherent_centre(const CoherentParams& p, double t) {
  return p.x0 * std::cos(p.omega * t) + p.p0 / (p.m * p.omega) * std::sin(p.omega * t);
}

cplx coherent_state(const CoherentParams& p, double x, double t) {
  const double mw = p.m * p.omega;
  const double xc = coherent_centre(p, t);
  const double pc = p.p0 * std::cos(p.omega * t) - mw * p.x0 * std::sin(p.omega * t);
  const double phase = -0.5 * p.omega * t + (pc * xc - p.p0 * p.x0) / (2 * p.hbar);
  const double d = x - xc;
  const double pref = std::pow(mw / (std::numbers::pi * p.hbar), 0.25);
  return pref * std::exp(cplx(-0.5 * mw * d * d / p.hbar, pc * d / p.hbar + phase));
}

std::vector<cplx> coherent_state(const CoherentParams& p, const SpatialGrid& grid, double t) {
  std::vector<cplx> out(grid.count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coherent_state(p, grid[i], t);
  return out;
}

}  // namespace actlab
