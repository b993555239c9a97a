#pragma once

#include <vector>

#include <json.hpp>

namespace actlab {

struct SlitGeometry {
  double p;  // momentum
  double d;  // slit separation
  double D;  // screen distance
  double far_field_ratio = 100.0;  // minimum D / d for far-field formulas

  bool far_field() const { return D / d >= far_field_ratio; }
};

// Validates positivity; throws on violation.
void validate(const SlitGeometry& g);

// p d y / D; requires the far field.
double action_difference(double y, const SlitGeometry& geom);

// 2 pi D / (eta p d)
double fringe_spacing(const SlitGeometry& geom, double eta);

// y_n = n * fringe_spacing
double interference_maximum(const SlitGeometry& geom, double eta, int n);

struct FringeMeasurement {
  double p, d, D, dy;
};

struct EtaEstimate {
  double eta;     // mean of the per-measurement estimates
  double spread;  // (max - min) / min over the estimates
  bool universal;
  std::vector<double> per_measurement;
};

void to_json(nlohmann::json& j, const EtaEstimate& e);

// eta_i = 2 pi D_i / (p_i d_i dy_i)
EtaEstimate infer_eta(const std::vector<FringeMeasurement>& measurements,
                      double tolerance = 1e-6);

// 2 pi / (eta p)
double de_broglie(double p, double eta);

}  // namespace actlab
