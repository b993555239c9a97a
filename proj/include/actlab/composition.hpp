#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "actlab/action_density.hpp"

namespace actlab {

struct CompositionReport {
  double variance_in_parts = 0.0;
  double variance_composed = 0.0;
  double additivity_residual = 0.0;
  double levy_linearity_residual = 0.0;
};

void to_json(nlohmann::json& j, const CompositionReport& r);

enum class ConvolutionMethod { fft, direct };

struct ComposeOptions {
  ConvolutionMethod method = ConvolutionMethod::fft;
  // Mass within `edge_spacings` of either end of an output row, relative to
  // the row total, above which the output grid is considered aliased.
  double edge_mass_tolerance = 1e-10;
  std::size_t edge_spacings = 4;
};

// Field over the second interval starting at a given intermediate point.
using FieldFamily = std::function<EndpointDensityField(double from)>;
// Field of the given duration starting at a given point.
using FieldBuilder = std::function<EndpointDensityField(double from, double duration)>;

// g(A; c, T1+T2 | a) = sum_b w_b  (g(.; b, T1 | a) * g(.; c, T2 | b))(A)
// Action grids must share a spacing; the output grid spans the sum of extents.
EndpointDensityField compose_fields(const EndpointDensityField& first,
                                    const FieldFamily& second,
                                    const ComposeOptions& opts = {});

// Short-time Gaussian fields over a fixed endpoint set, sharing one action
// grid per duration so repeated composition stays on a common lattice.
FieldBuilder gaussian_field_builder(LagrangianSpec lagrangian, double sigma2_rate,
                                    double hbar, EndpointSet endpoints,
                                    FieldOptions opts = {});

// N - 1 successive compositions of builder(., dt) starting from `a`.
EndpointDensityField iterate_short_time(const FieldBuilder& builder, double a, int steps,
                                        double dt, const ComposeOptions& opts = {});

// Direct convolution of two densities (fixed intermediate point).
ActionDensity convolve_densities(const ActionDensity& g1, const ActionDensity& g2,
                                 const ComposeOptions& opts = {});

CompositionReport check_variance_additivity(const ActionDensity& g1,
                                            const ActionDensity& g2,
                                            const ActionDensity& composed);

// Characteristic function of the unit-mass normalized density,
// sum_j w_j g_j e^{i k A_j} / mass.
std::vector<std::complex<double>> characteristic_function(const ActionDensity& g,
                                                          std::span<const double> k);

// psi(k) = log(g^(k)) / T with the phase unwrapped along the k list.
std::vector<std::complex<double>> levy_exponent(const ActionDensity& g, double duration,
                                                std::span<const double> wavenumbers);

// max_k |psi_T1(k) - psi_T2(k)| for two members of one semigroup.
double levy_linearity_residual(const ActionDensity& g_t1, double t1,
                               const ActionDensity& g_t2, double t2,
                               std::span<const double> wavenumbers);

}  // namespace actlab
