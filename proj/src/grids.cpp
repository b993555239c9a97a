#include "actlab/grids.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actlab/errors.hpp"

namespace actlab {

UniformAxis::UniformAxis(double min, double max, std::size_t count)
    : min_(min), max_(max), count_(count) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
    throw InvalidArgument("degenerate extent: need max > min");
  spacing_ = (max - min) / static_cast<double>(count - 1);
}

std::vector<double> UniformAxis::points() const {
  std::vector<double> p(count_);
  for (std::size_t i = 0; i < count_; ++i) p[i] = (*this)[i];
  return p;
}

std::vector<double> UniformAxis::weights() const {
  std::vector<double> w(count_, spacing_);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double UniformAxis::integrate(std::span<const double> f) const {
  if (f.size() != count_) throw GridMismatchError("sample count does not match grid");
  double inner = 0.0;
  for (std::size_t i = 1; i + 1 < count_; ++i) inner += f[i];
  return spacing_ * (inner + 0.5 * (f.front() + f.back()));
}

std::complex<double> UniformAxis::integrate(
    std::span<const std::complex<double>> f) const {
  if (f.size() != count_) throw GridMismatchError("sample count does not match grid");
  std::complex<double> inner = 0.0;
  for (std::size_t i = 1; i + 1 < count_; ++i) inner += f[i];
  return spacing_ * (inner + 0.5 * (f.front() + f.back()));
}

std::size_t UniformAxis::nearest(double x) const {
  const double t = std::round((x - min_) / spacing_);
  if (t <= 0) return 0;
  return std::min(static_cast<std::size_t>(t), count_ - 1);
}

bool UniformAxis::same_as(const UniformAxis& other, double rel_tol) const {
  const double scale = std::max({std::abs(min_), std::abs(max_), spacing_});
  return count_ == other.count_ && std::abs(min_ - other.min_) <= rel_tol * scale &&
         std::abs(max_ - other.max_) <= rel_tol * scale;
}

SpatialGrid::SpatialGrid(double min, double max, std::size_t count)
    : UniformAxis(min, max, count < kMinCount ? kMinCount : count) {
  if (count < kMinCount)
    throw InvalidArgument("spatial grid count below minimum of 8");
}

ActionGrid::ActionGrid(double min, double max, std::size_t count)
    : UniformAxis(min, max, count < kMinCount ? kMinCount : count) {
  if (count < kMinCount)
    throw InvalidArgument("action grid count below minimum of 16");
}

ActionGrid ActionGrid::covering(double lo, double hi, double spacing) {
  if (!(spacing > 0)) throw InvalidArgument("action spacing must be positive");
  if (!(hi >= lo)) throw InvalidArgument("action range inverted");
  const double mid = 0.5 * (lo + hi);
  const auto half =
      static_cast<std::size_t>(std::ceil(0.5 * (hi - lo) / spacing - 1e-9));
  const std::size_t h = std::max<std::size_t>(half, kMinCount / 2);
  const double half_extent = static_cast<double>(h) * spacing;
  return ActionGrid(mid - half_extent, mid + half_extent, 2 * h + 1);
}

TimeStepping::TimeStepping(double dt_, int steps_) : dt(dt_), steps(steps_) {
  if (!(dt > 0)) throw InvalidArgument("time step must be positive");
  if (steps < 1) throw InvalidArgument("need at least one step");
}

SpatialGrid build_spatial_grid(double min, double max, std::size_t count) {
  return SpatialGrid(min, max, count);
}

ActionGrid build_action_grid(double mean, double stddev, double half_width_sigmas,
                             std::size_t count) {
  if (!(stddev > 0)) throw InvalidArgument("action grid stddev must be positive");
  if (!(half_width_sigmas > 0)) throw InvalidArgument("half width must be positive");
  const double h = half_width_sigmas * stddev;
  return ActionGrid(mean - h, mean + h, count);
}

void to_json(nlohmann::json& j, const UniformAxis& g) {
  j = nlohmann::json{{"min", g.min()}, {"max", g.max()}, {"count", g.count()}};
}

SpatialGrid spatial_grid_from_json(const nlohmann::json& j) {
  return SpatialGrid(j.at("min").get<double>(), j.at("max").get<double>(),
                     j.at("count").get<std::size_t>());
}

ActionGrid action_grid_from_json(const nlohmann::json& j) {
  return ActionGrid(j.at("min").get<double>(), j.at("max").get<double>(),
                    j.at("count").get<std::size_t>());
}

}  // namespace actlab
