#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "actlab/action_density.hpp"

namespace actlab {

struct MaxEntModel {
  double eta = 0.0;
  double log_Z = 0.0;
  double Z = 0.0;
  double mean_A = 0.0;
  double var_A = 0.0;
  double resolution = 0.0;   // 1 / eta; infinite at eta = 0
  double naturalness = 0.0;  // eta * sqrt(var_A), reported only
  std::vector<std::string> warnings;
};

void to_json(nlohmann::json& j, const MaxEntModel& m);

struct TiltedField {
  // P(A, b | a) on the field's grids, unit total mass.
  EndpointDensityField probability;
  MaxEntModel model;
};

// P = g e^{-eta A} / Z, computed in the log domain.
TiltedField maxent_tilt(const EndpointDensityField& field, double eta);

// Marginal P(A | a) of a tilted field.
ActionDensity tilted_marginal(const TiltedField& tilted);

// I(eta) = Var(A) under the tilted marginal.
double fisher_information(const EndpointDensityField& field, double eta);

struct SolveEtaOptions {
  double eta_min = 1e-6;
  double eta_max = 1e6;
  double tolerance = 1e-12;  // relative on the mean
  int max_iterations = 400;
};

// Inverse of the monotone map eta -> mean_A.
double solve_eta(const EndpointDensityField& field, double target_mean,
                 const SolveEtaOptions& opts = {});

struct CramerRaoResult {
  double delta_A;
  double delta_eta;
  double product;
  bool pass;
};

void to_json(nlohmann::json& j, const CramerRaoResult& r);

// Delta A = sqrt(I); passes when Delta A * Delta eta >= 1 - 1e-9.
CramerRaoResult cramer_rao_check(double fisher_info, double delta_eta);

// |L1 - L2| dt eta
double indistinguishability_ratio_fixed(double l1, double l2, double dt, double eta);
// |L1 - L2| sqrt(dt / beta)
double indistinguishability_ratio_diffusive(double l1, double l2, double dt, double beta);

// Least-squares slope of log y against log x.
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace actlab
