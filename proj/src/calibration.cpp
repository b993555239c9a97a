#include "actlab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "actlab/errors.hpp"

namespace actlab {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

void validate(const SlitGeometry& g) {
  if (!(g.p > 0) || !(g.d > 0) || !(g.D > 0))
    throw InvalidArgument("slit geometry needs positive p, d and D");
}

double action_difference(double y, const SlitGeometry& geom) {
  validate(geom);
  if (!geom.far_field()) throw InvalidArgument("far-field condition D/d violated");
  return geom.p * geom.d * y / geom.D;
}

double fringe_spacing(const SlitGeometry& geom, double eta) {
  validate(geom);
  if (!(eta > 0)) throw InvalidArgument("eta must be positive");
  return kTwoPi * geom.D / (eta * geom.p * geom.d);
}

double interference_maximum(const SlitGeometry& geom, double eta, int n) {
  return n * fringe_spacing(geom, eta);
}

void to_json(nlohmann::json& j, const EtaEstimate& e) {
  j = nlohmann::json{{"eta", e.eta},
                     {"hbar", 1.0 / e.eta},
                     {"spread", e.spread},
                     {"universal", e.universal},
                     {"per_measurement", e.per_measurement}};
}

EtaEstimate infer_eta(const std::vector<FringeMeasurement>& ms, double tolerance) {
  if (ms.empty()) throw InvalidArgument("no fringe measurements");
  EtaEstimate out{};
  for (const auto& m : ms) {
    if (!(m.p > 0) || !(m.d > 0) || !(m.D > 0) || !(m.dy > 0))
      throw InvalidArgument("fringe measurements must be positive");
    out.per_measurement.push_back(kTwoPi * m.D / (m.p * m.d * m.dy));
  }
  double sum = 0;
  for (double e : out.per_measurement) sum += e;
  out.eta = sum / static_cast<double>(ms.size());
  const auto [lo, hi] = std::minmax_element(out.per_measurement.begin(), out.per_measurement.end());
  out.spread = (*hi - *lo) / *lo;
  out.universal = out.spread < tolerance;
  return out;
}

double de_broglie(double p, double eta) {
  if (!(p > 0) || !(eta > 0)) throw InvalidArgument("p and eta must be positive");
  return kTwoPi / (eta * p);
}

}  // namespace actlab
