#pragma once

#include <functional>
#include <vector>

#include "actlab/action_density.hpp"
#include "actlab/lagrangian.hpp"

namespace actlab {

// Mean action of a transition from -> to over duration T.
using MeanActionFn = std::function<double(double from, double to, double duration)>;

// Midpoint-rule single-segment action, the mean of the Gaussian short-time law.
MeanActionFn segment_mean_action(LagrangianSpec lagrangian);

struct StationaryPoint {
  double b;
  int multiplicity;  // number of distinct roots found in the bracket
};

struct StationaryOptions {
  double fd_step = 1e-4;  // central-difference step for d/db
  int scan_intervals = 400;
  double tolerance = 1e-12;
};

// Root of d/db [Abar(b, T1 | a) + Abar(c, T2 | b)] = 0 nearest (a + c) / 2.
StationaryPoint stationary_midpoint(double a, double c, double t1, double t2,
                                    const MeanActionFn& mean_action,
                                    const StationaryOptions& opts = {});

struct DiscretePath {
  std::vector<double> positions;  // x_0 = a, ..., x_N = b
  double dt;
  LagrangianSpec lagrangian;
  int iterations = 0;
  double stationarity_residual = 0.0;  // max |dS/dx_j| over interior nodes

  std::size_t segments() const { return positions.size() - 1; }
};

struct PathSolveOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
  // Harmonic paths with T omega / pi within this distance of a positive
  // integer are rejected as caustic.
  double caustic_margin = 1e-2;
};

DiscretePath discrete_stationary_path(double a, double b, int segments, double dt,
                                      const LagrangianSpec& lagrangian,
                                      const PathSolveOptions& opts = {});

// dS/dx_j = m (2 x_j - x_{j-1} - x_{j+1}) / dt - (V'(xbar_{j-1}) + V'(xbar_j)) dt / 2
std::vector<double> action_gradient(const DiscretePath& path);

// max over interior nodes of |m (v_j - v_{j-1}) / dt + V'(x_j)|
double euler_lagrange_residual(const DiscretePath& path);

// sum_k L(xbar_k, v_k) dt
double classical_action_along(const DiscretePath& path);

// Closed-form classical actions used for comparison.
double free_classical_action(double m, double a, double b, double duration);
double harmonic_classical_action(double m, double omega, double a, double b, double duration);

// sqrt(Var A) / mean A of the density built for the given scale.
using ScaledDensityBuilder = std::function<ActionDensity(double scale)>;
double concentration_check(const ScaledDensityBuilder& builder, double scale);

struct ConcentrationSeries {
  std::vector<double> scales;
  std::vector<double> ratios;
  bool strictly_decreasing;
};

ConcentrationSeries concentration_series(const ScaledDensityBuilder& builder,
                                         const std::vector<double>& scales);

// N = A / hbar
double action_number(double action, double hbar);

}  // namespace actlab
