#pragma once

// Closed-form states used as oracles for the kernel pipeline.

#include <complex>
#include <vector>

#include "actlab/grids.hpp"

namespace actlab {

struct PacketParams {
  double m = 1.0;
  double hbar = 1.0;
  double sigma0 = 1.0;  // position standard deviation at t = 0
  double x0 = 0.0;
  double p0 = 0.0;
};

// Free Gaussian packet at time t, unit norm.
std::complex<double> free_packet(const PacketParams& p, double x, double t);
std::vector<std::complex<double>> free_packet(const PacketParams& p, const SpatialGrid& grid,
                                              double t);

struct CoherentParams {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
};

// Harmonic-oscillator coherent state (ground-state width) at time t, unit norm.
std::complex<double> coherent_state(const CoherentParams& p, double x, double t);
std::vector<std::complex<double>> coherent_state(const CoherentParams& p,
                                                 const SpatialGrid& grid, double t);

// Classical centre of the coherent state.
double coherent_centre(const CoherentParams& p, double t);

}  // namespace actlab
