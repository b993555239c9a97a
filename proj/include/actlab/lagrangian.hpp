#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "actlab/grids.hpp"

namespace actlab {

enum class PotentialKind { free, harmonic, custom };

// L(x, v) = 1/2 m v^2 - V(x). Only the potential is system input; the
// kinetic part is fixed.
class LagrangianSpec {
 public:
  static LagrangianSpec free(double mass);
  // V(x) = 1/2 m omega^2 x^2
  static LagrangianSpec harmonic(double mass, double omega);
  static LagrangianSpec custom(double mass, std::function<double(double)> potential,
                               std::string tag = "custom");
  // Cubic (Catmull-Rom) interpolation of samples on a grid, clamped outside.
  static LagrangianSpec sampled(double mass, const SpatialGrid& grid,
                                std::vector<double> values);

  double mass() const { return mass_; }
  PotentialKind kind() const { return kind_; }
  double omega() const { return omega_; }
  const std::string& tag() const { return tag_; }

  double potential(double x) const;
  double potential_gradient(double x) const;   // V'(x)
  double potential_curvature(double x) const;  // V''(x)

  double value(double x, double v) const { return 0.5 * mass_ * v * v - potential(x); }
  double momentum(double v) const { return mass_ * v; }  // dL/dv

  // Same system with V -> V + c.
  LagrangianSpec shifted(double c) const;

 private:
  LagrangianSpec(double mass, PotentialKind kind, std::string tag);

  double mass_;
  PotentialKind kind_;
  std::string tag_;
  double omega_ = 0.0;
  double offset_ = 0.0;
  std::shared_ptr<const std::function<double(double)>> fn_;
};

}  // namespace actlab
