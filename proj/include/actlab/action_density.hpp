#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "actlab/grids.hpp"
#include "actlab/lagrangian.hpp"

namespace actlab {

struct MassParams {
  double m = 1.0;
  double hbar = 1.0;
  double sigma2_rate = 1.0;  // action^2 per unit time
};

// Sampled density of action states g(A; b, T | a). Unnormalized: the total
// mass carries the multiplicity of the transition, not a probability.
class ActionDensity {
 public:
  ActionDensity(ActionGrid grid, std::vector<double> samples, double a, double b,
                double duration, MassParams params = {},
                std::optional<double> tracked_mean = std::nullopt);

  const ActionGrid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double duration() const { return duration_; }
  const MassParams& params() const { return params_; }
  // Mean carried alongside the samples when it is known analytically.
  std::optional<double> tracked_mean() const { return tracked_mean_; }

  double mass() const { return grid_.integrate(samples_); }

  ActionDensity scaled(double factor) const;
  // Unit-mass copy, for display and for probability-style diagnostics.
  ActionDensity normalized() const;

 private:
  ActionGrid grid_;
  std::vector<double> samples_;
  double a_, b_, duration_;
  MassParams params_;
  std::optional<double> tracked_mean_;
};

struct ActionMoments {
  double mass;
  double mean;
  double variance;
  double excess_kurtosis;
};

ActionMoments action_moments(const ActionDensity& g);
double mean_action(const ActionDensity& g);
double variance_action(const ActionDensity& g);

// m (b-a)^2 / (2 dt) - V((a+b)/2) dt
double classical_action(double a, double b, double dt, const LagrangianSpec& lagrangian);

// Gaussian of the given mean, variance and mass sampled on `grid`. The grid
// must resolve it with at least 8 points per standard deviation.
ActionDensity gaussian_density(const ActionGrid& grid, double mean, double variance,
                               double mass, double a, double b, double duration,
                               MassParams params = {});

// Narrowest representable stand-in for delta(A - A0): a Gaussian of width
// two grid spacings.
ActionDensity delta_like(const ActionGrid& grid, double a0, double mass, double a,
                         double b, double duration, MassParams params = {});

struct ShortTimeOptions {
  double points_per_sigma = 8.0;
  double half_width_sigmas = 8.0;
};

// Normal(mean = L(xbar, v) dt, variance = sigma2_rate dt) on an auto-built grid.
ActionDensity gaussian_short_time(double a, double b, double dt,
                                  const LagrangianSpec& lagrangian, double sigma2_rate,
                                  double hbar = 1.0, ShortTimeOptions opts = {});

using ShortTimeBuilder = std::function<ActionDensity(double from, double to, double dt)>;

ShortTimeBuilder gaussian_builder(LagrangianSpec lagrangian, double sigma2_rate,
                                  double hbar = 1.0);

struct EmergentLagrangianOptions {
  double initial_dt = 0.1;
  double tolerance = 1e-10;  // relative to max(1, |L|)
  int max_refinements = 24;
};

struct EmergentLagrangianResult {
  double value;
  int refinements;
  double last_change;
  std::vector<double> raw_estimates;  // mean_action / dt per level
};

// Richardson-extrapolated limit of mean_action(g(x -> x + v dt, dt)) / dt as
// dt is halved.
EmergentLagrangianResult emergent_lagrangian(const ShortTimeBuilder& builder, double x,
                                             double v,
                                             EmergentLagrangianOptions opts = {});

// Endpoint positions with their quadrature weights.
struct EndpointSet {
  std::vector<double> positions;
  std::vector<double> weights;

  static EndpointSet from_grid(const SpatialGrid& grid);
  static EndpointSet single(double x, double weight = 1.0);
  std::size_t size() const { return positions.size(); }
};

// One density per final endpoint b, sharing initial point, duration and
// action grid. Samples are stored row-major (endpoint, action).
class EndpointDensityField {
 public:
  EndpointDensityField(double initial, double duration, EndpointSet endpoints,
                       ActionGrid grid, std::vector<double> samples, MassParams params = {},
                       std::vector<double> tracked_means = {});

  double initial() const { return initial_; }
  double duration() const { return duration_; }
  const EndpointSet& endpoints() const { return endpoints_; }
  const ActionGrid& grid() const { return grid_; }
  const MassParams& params() const { return params_; }
  std::size_t size() const { return endpoints_.size(); }

  std::span<const double> row(std::size_t i) const;
  double row_mass(std::size_t i) const { return grid_.integrate(row(i)); }
  bool row_is_zero(std::size_t i) const;
  std::optional<double> tracked_mean(std::size_t i) const;
  bool has_tracked_means() const { return !tracked_means_.empty(); }

  ActionDensity density(std::size_t i) const;

 private:
  double initial_, duration_;
  EndpointSet endpoints_;
  ActionGrid grid_;
  std::vector<double> samples_;
  MassParams params_;
  std::vector<double> tracked_means_;
};

struct FieldOptions {
  // Locality cutoff |b - a| <= v_max dt. Zero selects 10 sqrt(sigma2_rate) / m.
  double v_max = 0.0;
  double points_per_sigma = 8.0;
  double half_width_sigmas = 8.0;
  // Action spacing; defaults to sqrt(sigma2_rate dt) / points_per_sigma.
  std::optional<double> action_spacing;
  // Shared action grid; built from the endpoint set when absent.
  std::optional<ActionGrid> action_grid;
};

double default_v_max(const LagrangianSpec& lagrangian, double sigma2_rate);

// Short-time Gaussian field from `a` over all endpoints.
EndpointDensityField short_time_field(double a, double dt, const EndpointSet& endpoints,
                                      const LagrangianSpec& lagrangian, double sigma2_rate,
                                      double hbar = 1.0, const FieldOptions& opts = {});

// Action grid wide enough for every short-time transition between points of
// `endpoints` allowed by the locality cutoff.
ActionGrid short_time_action_grid(double dt, const EndpointSet& endpoints,
                                  const LagrangianSpec& lagrangian, double sigma2_rate,
                                  const FieldOptions& opts = {});

// g~(A) = sum_b w_b g(A; b | a)
ActionDensity marginal_over_endpoints(const EndpointDensityField& field);

}  // namespace actlab
