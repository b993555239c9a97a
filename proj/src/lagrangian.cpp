#include "actlab/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "actlab/errors.hpp"

namespace actlab {

namespace {

double fd_step(double x) { return 1e-4 * std::max(1.0, std::abs(x)); }

struct CubicSamples {
  double min, spacing;
  std::vector<double> v;

  double operator()(double x) const {
    const std::size_t n = v.size();
    const double t = (x - min) / spacing;
    if (t <= 0) return v.front();
    if (t >= static_cast<double>(n - 1)) return v.back();
    const auto i = static_cast<std::size_t>(t);
    const double s = t - static_cast<double>(i);
    const double p1 = v[i], p2 = v[i + 1];
    const double p0 = i > 0 ? v[i - 1] : 2 * p1 - p2;
    const double p3 = i + 2 < n ? v[i + 2] : 2 * p2 - p1;
    return p1 + 0.5 * s *
                    (p2 - p0 +
                     s * (2 * p0 - 5 * p1 + 4 * p2 - p3 + s * (3 * (p1 - p2) + p3 - p0)));
  }
};

}  // namespace

LagrangianSpec::LagrangianSpec(double mass, PotentialKind kind, std::string tag)
    : mass_(mass), kind_(kind), tag_(std::move(tag)) {
  if (!(mass > 0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
}

LagrangianSpec LagrangianSpec::free(double mass) {
  return LagrangianSpec(mass, PotentialKind::free, "free");
}

LagrangianSpec LagrangianSpec::harmonic(double mass, double omega) {
  if (!(omega > 0)) throw InvalidArgument("harmonic frequency must be positive");
  LagrangianSpec l(mass, PotentialKind::harmonic, "harmonic");
  l.omega_ = omega;
  return l;
}

LagrangianSpec LagrangianSpec::custom(double mass, std::function<double(double)> potential,
                                      std::string tag) {
  if (!potential) throw InvalidArgument("custom potential is empty");
  LagrangianSpec l(mass, PotentialKind::custom, std::move(tag));
  l.fn_ = std::make_shared<const std::function<double(double)>>(std::move(potential));
  return l;
}

LagrangianSpec LagrangianSpec::sampled(double mass, const SpatialGrid& grid,
                                       std::vector<double> values) {
  if (values.size() != grid.count())
    throw GridMismatchError("potential samples do not match grid");
  CubicSamples c{grid.min(), grid.spacing(), std::move(values)};
  return custom(mass, std::move(c), "custom-sampled");
}

double LagrangianSpec::potential(double x) const {
  switch (kind_) {
    case PotentialKind::free:
      return offset_;
    case PotentialKind::harmonic:
      return 0.5 * mass_ * omega_ * omega_ * x * x + offset_;
    case PotentialKind::custom:
      return (*fn_)(x) + offset_;
  }
  return offset_;
}

double LagrangianSpec::potential_gradient(double x) const {
  switch (kind_) {
    case PotentialKind::free:
      return 0.0;
    case PotentialKind::harmonic:
      return mass_ * omega_ * omega_ * x;
    case PotentialKind::custom: {
      const double h = fd_step(x);
      return ((*fn_)(x + h) - (*fn_)(x - h)) / (2 * h);
    }
  }
  return 0.0;
}

double LagrangianSpec::potential_curvature(double x) const {
  switch (kind_) {
    case PotentialKind::free:
      return 0.0;
    case PotentialKind::harmonic:
      return mass_ * omega_ * omega_;
    case PotentialKind::custom: {
      const double h = 10 * fd_step(x);
      return ((*fn_)(x + h) - 2 * (*fn_)(x) + (*fn_)(x - h)) / (h * h);
    }
  }
  return 0.0;
}

LagrangianSpec LagrangianSpec::shifted(double c) const {
  LagrangianSpec l = *this;
  l.offset_ += c;
  return l;
}

}  // namespace actlab
