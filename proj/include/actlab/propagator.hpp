#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "actlab/action_density.hpp"
#include "actlab/grids.hpp"
#include "actlab/lagrangian.hpp"

namespace actlab {

using cplx = std::complex<double>;

struct Character {
  double eta;
};

// e^{i eta A}
cplx character_eval(Character chi, double action);

enum class KernelProvenance { from_density, analytic_short_time, band_limited, composed, identity };

std::string to_string(KernelProvenance p);

// K(b | a) on a spatial grid, row-major with rows indexed by the final point.
// Applied to a state as psi'(b) = sum_a K(b|a) w_a psi(a).
class Kernel {
 public:
  Kernel(SpatialGrid grid, std::vector<cplx> entries, double duration, double hbar,
         KernelProvenance provenance);

  const SpatialGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.count(); }
  double duration() const { return duration_; }
  double hbar() const { return hbar_; }
  KernelProvenance provenance() const { return provenance_; }

  cplx operator()(std::size_t b, std::size_t a) const { return entries_[b * size() + a]; }
  std::span<const cplx> entries() const { return entries_; }

 private:
  SpatialGrid grid_;
  std::vector<cplx> entries_;
  double duration_;
  double hbar_;
  KernelProvenance provenance_;
};

// K(b | a) = sum_j w_j g(A_j; b | a) e^{i eta A_j}
cplx kernel_value(const ActionDensity& g, double eta);

// One column of the kernel: all endpoints of the field for its initial point.
// Requires eta * dA <= pi/4.
std::vector<cplx> kernel_from_density(const EndpointDensityField& field, double eta);

// Full kernel from fields built at every grid point (the field endpoints
// must be the grid points).
using FieldAt = std::function<EndpointDensityField(double from)>;
Kernel kernel_from_fields(const FieldAt& builder, const SpatialGrid& grid, double eta,
                          double hbar);

// Principal branch of (m / (2 pi i hbar t))^{1/2}; t may be negative.
cplx short_time_normalization(double m, double hbar, double t);

// (m / (2 pi i hbar dt))^{1/2} exp[(i/hbar)(m (b-a)^2 / (2 dt) - V((a+b)/2) dt)]
// for any nonzero dt.
cplx short_time_entry(const LagrangianSpec& lagrangian, double a, double b, double dt,
                      double hbar);

Kernel analytic_short_time(const LagrangianSpec& lagrangian, double dt, double hbar,
                           const SpatialGrid& grid);

// Same midpoint kernel realized on the grid's band-limited subspace: the
// free factor is the exact periodic propagator restricted to
// |k| <= band_fraction * k_Nyquist, multiplied by exp(-i V((a+b)/2) dt / hbar).
// Usable at time steps too small for the pointwise kernel to be resolved.
Kernel band_limited_short_time(const LagrangianSpec& lagrangian, double dt, double hbar,
                               const SpatialGrid& grid, double band_fraction = 0.8);

// Grid delta: K(b|a) = delta_ab / w_a, the identity under trapezoid application.
Kernel identity_kernel(const SpatialGrid& grid, double hbar);

// psi'(b) = sum_a K(b|a) w_a psi(a)
std::vector<cplx> apply_weighted(const Kernel& k, std::span<const cplx> psi);
// Adjoint with respect to the weighted inner product: sum_b conj(K(b|a)) w_b phi(b)
std::vector<cplx> apply_adjoint(const Kernel& k, std::span<const cplx> phi);

// K(c|a) = sum_b K2(c|b) w_b K1(b|a)
Kernel compose_kernels(const Kernel& k2, const Kernel& k1);

// Band-limited probe packets used to measure kernels in operator sense:
// Gaussians of width extent/40 at three centres with three mean momenta.
std::vector<std::vector<cplx>> probe_packets(const SpatialGrid& grid, double hbar);

// ||(A - B) W P||_F / ||B W P||_F over the probe set P.
double operator_relative_error(const Kernel& a, const Kernel& b,
                               const std::vector<std::vector<cplx>>& probes);

// Entrywise relative Frobenius error ||A - B||_F / ||B||_F.
double pointwise_relative_error(const Kernel& a, const Kernel& b);

struct CompletenessReport {
  // max_{c,a} |sum_b w_b conj(K(b|c)) K(b|a) - delta_grid(c, a)|
  double pointwise_residual;
  // max over probes of ||U^dagger U psi - psi|| / ||psi||
  double probe_residual;
};

CompletenessReport completeness_check(const Kernel& k);
CompletenessReport completeness_check(const Kernel& k,
                                      const std::vector<std::vector<cplx>>& probes);

// |N(2dt) - N(dt)^2 sqrt(pi i hbar dt / m)| / |N(2dt)|
double normalization_recursion_check(double m, double hbar, double dt);

}  // namespace actlab
