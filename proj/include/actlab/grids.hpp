#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace actlab {

// Uniform 1-D axis [min, max] with `count` points, endpoints included.
// Quadrature everywhere in the library is the trapezoidal rule on this axis.
class UniformAxis {
 public:
  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t count() const { return count_; }
  double spacing() const { return spacing_; }
  double extent() const { return max_ - min_; }

  double operator[](std::size_t i) const {
    return i + 1 == count_ ? max_ : min_ + static_cast<double>(i) * spacing_;
  }
  std::vector<double> points() const;
  std::vector<double> weights() const;
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == count_) ? 0.5 * spacing_ : spacing_;
  }

  double integrate(std::span<const double> f) const;
  std::complex<double> integrate(std::span<const std::complex<double>> f) const;

  // Index of the point nearest to x, clamped to the axis.
  std::size_t nearest(double x) const;

  bool same_as(const UniformAxis& other, double rel_tol = 1e-12) const;

 protected:
  UniformAxis(double min, double max, std::size_t count);

 private:
  double min_;
  double max_;
  std::size_t count_;
  double spacing_;
};

class SpatialGrid : public UniformAxis {
 public:
  static constexpr std::size_t kMinCount = 8;
  SpatialGrid(double min, double max, std::size_t count);
};

class ActionGrid : public UniformAxis {
 public:
  static constexpr std::size_t kMinCount = 16;
  ActionGrid(double min, double max, std::size_t count);

  // Grid with the given spacing whose extent covers [lo, hi].
  static ActionGrid covering(double lo, double hi, double spacing);
};

struct TimeStepping {
  TimeStepping(double dt, int steps);
  double dt;
  int steps;
  double total() const { return dt * steps; }
};

SpatialGrid build_spatial_grid(double min, double max, std::size_t count);

// extent = mean +- half_width_sigmas * stddev
ActionGrid build_action_grid(double mean, double stddev, double half_width_sigmas,
                             std::size_t count);

void to_json(nlohmann::json& j, const UniformAxis& g);
SpatialGrid spatial_grid_from_json(const nlohmann::json& j);
ActionGrid action_grid_from_json(const nlohmann::json& j);

}  // namespace actlab
