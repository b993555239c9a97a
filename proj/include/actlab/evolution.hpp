#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "actlab/grids.hpp"
#include "actlab/lagrangian.hpp"
#include "actlab/propagator.hpp"

namespace actlab {

// Fraction of the grid Nyquist wavenumber treated as the band limit.
inline constexpr double kBandFraction = 0.8;

class WaveFunction {
 public:
  WaveFunction(SpatialGrid grid, std::vector<cplx> samples, double hbar, double time = 0.0);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const cplx> samples() const { return samples_; }
  double hbar() const { return hbar_; }
  double time() const { return time_; }

  // <psi|psi> by trapezoid
  double norm() const;
  // Spectral mass above kBandFraction * k_Nyquist relative to the total.
  double out_of_band_fraction() const;
  // True when out_of_band_fraction() <= 1e-10.
  bool band_limited() const { return band_limited_; }

  WaveFunction scaled(cplx factor) const;

 private:
  SpatialGrid grid_;
  std::vector<cplx> samples_;
  double hbar_;
  double time_;
  bool band_limited_;
};

// Combination alpha psi1 + beta psi2 on a shared grid.
WaveFunction combine(cplx alpha, const WaveFunction& psi1, cplx beta, const WaveFunction& psi2);

// psi'(b) = sum_a K(b|a) w_a psi(a); time advanced by K.duration.
WaveFunction apply_kernel(const Kernel& k, const WaveFunction& psi);

struct EvolutionTrace {
  std::vector<WaveFunction> snapshots;  // snapshots[0] is the initial state
  std::vector<double> norms;
  std::vector<double> residuals;  // filled by schrodinger_residual; NaN at the ends
  double dt = 0.0;
  int band_limit_warnings = 0;
};

struct EvolveOptions {
  double max_norm_drift = 1e-3;
};

EvolutionTrace evolve(const Kernel& k, const WaveFunction& psi0, int steps,
                      const EvolveOptions& opts = {});

// d^2 psi / dx^2 by FFT on the grid treated as periodic.
std::vector<cplx> spectral_second_derivative(const SpatialGrid& grid, std::span<const cplx> psi);
std::vector<cplx> spectral_derivative(const SpatialGrid& grid, std::span<const cplx> psi);

// H psi = -(hbar^2 / 2m) psi'' + V psi
std::vector<cplx> apply_hamiltonian(const WaveFunction& psi, const LagrangianSpec& lagrangian);

// ||i hbar (psi_{n+1} - psi_{n-1}) / (2 dt) - H psi_n|| / ||H psi_n|| for
// interior snapshots n. The result has one entry per snapshot; the two end
// entries are NaN. Also stored into trace.residuals.
std::vector<double> schrodinger_residual(EvolutionTrace& trace, const LagrangianSpec& lagrangian);

struct Expectations {
  double x, p, energy;
};

Expectations expectations(const WaveFunction& psi, const LagrangianSpec& lagrangian);

struct GaussianIntegralResult {
  cplx zeroth;  // expected 1
  cplx second;  // expected i hbar dt / m
  double residual_zeroth;
  double residual_second;  // relative to hbar dt / m
  double truncation;       // integrand magnitude at the contour ends
  bool truncation_ok;
};

struct GaussianIntegralOptions {
  double half_width_sigmas = 12.0;
  std::size_t points = 4001;
};

// Moments of N(dt) e^{i m y^2 / (2 hbar dt)} along y = e^{i pi/4} s.
GaussianIntegralResult gaussian_integral_check(double m, double hbar, double dt,
                                               const GaussianIntegralOptions& opts = {});

// Same zeroth moment by naive real-axis trapezoid over [-L, L]; kept to show
// why the rotated contour is used.
cplx gaussian_integral_real_axis(double m, double hbar, double dt, double half_width,
                                 std::size_t points);

struct CommutatorResult {
  double residual;
  bool degenerate;  // psi == 0
};

// max |(x p - p x) psi - i hbar psi| / max |psi| with p = -i hbar d/dx spectral.
CommutatorResult commutator_check(const WaveFunction& psi);

}  // namespace actlab
