#include "actlab/action_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actlab/errors.hpp"

namespace actlab {

namespace {

void check_samples(std::span<const double> s) {
  for (double v : s) {
    if (!std::isfinite(v)) throw InvalidArgument("density samples must be finite");
    if (v < 0) throw InvalidArgument("density samples must be nonnegative");
  }
}

void fill_gaussian(const ActionGrid& grid, double mean, double variance, double mass,
                   std::span<double> out) {
  const double sd = std::sqrt(variance);
  if (grid.spacing() > sd / 8.0 * (1 + 1e-9))
    throw UndersamplingError("action grid resolves the Gaussian with fewer than 8 points per stddev");
  const double norm = mass / std::sqrt(2 * std::numbers::pi * variance);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double z = (grid[i] - mean) / sd;
    out[i] = norm * std::exp(-0.5 * z * z);
  }
}

}  // namespace

ActionDensity::ActionDensity(ActionGrid grid, std::vector<double> samples, double a,
                             double b, double duration, MassParams params,
                             std::optional<double> tracked_mean)
    : grid_(std::move(grid)),
      samples_(std::move(samples)),
      a_(a),
      b_(b),
      duration_(duration),
      params_(params),
      tracked_mean_(tracked_mean) {
  if (samples_.size() != grid_.count()) throw GridMismatchError("samples do not match action grid");
  check_samples(samples_);
}

ActionDensity ActionDensity::scaled(double factor) const {
  if (!(factor >= 0)) throw InvalidArgument("scale factor must be nonnegative");
  std::vector<double> s(samples_);
  for (auto& v : s) v *= factor;
  return ActionDensity(grid_, std::move(s), a_, b_, duration_, params_, tracked_mean_);
}

ActionDensity ActionDensity::normalized() const {
  const double m = mass();
  if (!(m > 0)) throw ZeroMassError("cannot normalize a zero-mass density");
  return scaled(1.0 / m);
}

ActionMoments action_moments(const ActionDensity& g) {
  const auto& grid = g.grid();
  const auto s = g.samples();
  const double mass = grid.integrate(s);
  if (!(mass > 0)) throw ZeroMassError("zero total mass");
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = s[i] * grid[i];
  const double mean = grid.integrate(w) / mass;
  double m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = grid[i] - mean;
    const double wi = grid.weight(i) * s[i];
    m2 += wi * d * d;
    m4 += wi * d * d * d * d;
  }
  m2 /= mass;
  m4 /= mass;
  const double kurt = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  return {mass, mean, m2, kurt};
}

double mean_action(const ActionDensity& g) { return action_moments(g).mean; }
double variance_action(const ActionDensity& g) { return action_moments(g).variance; }

double classical_action(double a, double b, double dt, const LagrangianSpec& lagrangian) {
  if (!(dt > 0)) throw InvalidArgument("duration must be positive");
  const double d = b - a;
  return lagrangian.mass() * d * d / (2 * dt) - lagrangian.potential(0.5 * (a + b)) * dt;
}

ActionDensity gaussian_density(const ActionGrid& grid, double mean, double variance,
                               double mass, double a, double b, double duration,
                               MassParams params) {
  if (!(variance > 0)) throw InvalidArgument("variance must be positive");
  std::vector<double> s(grid.count());
  fill_gaussian(grid, mean, variance, mass, s);
  return ActionDensity(grid, std::move(s), a, b, duration, params, mean);
}

ActionDensity delta_like(const ActionGrid& grid, double a0, double mass, double a,
                         double b, double duration, MassParams params) {
  const double sd = 2.0 * grid.spacing();
  std::vector<double> s(grid.count());
  const double norm = mass / std::sqrt(2 * std::numbers::pi * sd * sd);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double z = (grid[i] - a0) / sd;
    s[i] = norm * std::exp(-0.5 * z * z);
  }
  return ActionDensity(grid, std::move(s), a, b, duration, params, a0);
}

ActionDensity gaussian_short_time(double a, double b, double dt,
                                  const LagrangianSpec& lagrangian, double sigma2_rate,
                                  double hbar, ShortTimeOptions opts) {
  if (!(dt > 0)) throw InvalidArgument("duration must be positive");
  if (!(sigma2_rate > 0)) throw InvalidArgument("sigma2_rate must be positive");
  if (opts.points_per_sigma < 8) throw InvalidArgument("need at least 8 points per stddev");
  const double xbar = 0.5 * (a + b);
  const double v = (b - a) / dt;
  const double mean = lagrangian.value(xbar, v) * dt;
  const double variance = sigma2_rate * dt;
  const double sd = std::sqrt(variance);
  const double spacing = sd / opts.points_per_sigma;
  const double scale = std::max(std::abs(mean), sd) + sd * opts.half_width_sigmas;
  if (!(spacing > 64 * std::numeric_limits<double>::epsilon() * scale))
    throw UndersamplingError("action variance underflows relative to the grid scale");
  const auto half = static_cast<std::size_t>(
      std::ceil(opts.half_width_sigmas * opts.points_per_sigma));
  const ActionGrid grid(mean - static_cast<double>(half) * spacing,
                        mean + static_cast<double>(half) * spacing, 2 * half + 1);
  return gaussian_density(grid, mean, variance, 1.0, a, b, dt,
                          {lagrangian.mass(), hbar, sigma2_rate});
}

ShortTimeBuilder gaussian_builder(LagrangianSpec lagrangian, double sigma2_rate, double hbar) {
  return [lagrangian = std::move(lagrangian), sigma2_rate, hbar](double from, double to,
                                                                 double dt) {
    return gaussian_short_time(from, to, dt, lagrangian, sigma2_rate, hbar);
  };
}

EmergentLagrangianResult emergent_lagrangian(const ShortTimeBuilder& builder, double x,
                                             double v, EmergentLagrangianOptions opts) {
  if (!(opts.initial_dt > 0)) throw InvalidArgument("initial dt must be positive");
  EmergentLagrangianResult result{0.0, 0, std::numeric_limits<double>::infinity(), {}};
  // Richardson tableau assuming an expansion in integer powers of dt.
  std::vector<std::vector<double>> table;
  double dt = opts.initial_dt;
  for (int level = 0; level <= opts.max_refinements; ++level, dt *= 0.5) {
    const double est = mean_action(builder(x, x + v * dt, dt)) / dt;
    result.raw_estimates.push_back(est);
    std::vector<double> row{est};
    for (int j = 1; j <= level; ++j) {
      const double f = std::ldexp(1.0, j) - 1.0;
      row.push_back(row[j - 1] + (row[j - 1] - table[level - 1][j - 1]) / f);
    }
    table.push_back(std::move(row));
    if (level > 0) {
      const double cur = table[level][level];
      const double prev = table[level - 1][level - 1];
      result.value = cur;
      result.refinements = level;
      result.last_change = std::abs(cur - prev);
      if (result.last_change < opts.tolerance * std::max(1.0, std::abs(cur))) return result;
    }
  }
  throw ConvergenceError("emergent Lagrangian did not converge within the refinement budget");
}

EndpointSet EndpointSet::from_grid(const SpatialGrid& grid) {
  return {grid.points(), grid.weights()};
}

EndpointSet EndpointSet::single(double x, double weight) { return {{x}, {weight}}; }

EndpointDensityField::EndpointDensityField(double initial, double duration,
                                           EndpointSet endpoints, ActionGrid grid,
                                           std::vector<double> samples, MassParams params,
                                           std::vector<double> tracked_means)
    : initial_(initial),
      duration_(duration),
      endpoints_(std::move(endpoints)),
      grid_(std::move(grid)),
      samples_(std::move(samples)),
      params_(params),
      tracked_means_(std::move(tracked_means)) {
  if (endpoints_.positions.empty()) throw InvalidArgument("field needs at least one endpoint");
  if (endpoints_.weights.size() != endpoints_.positions.size())
    throw InvalidArgument("endpoint weights do not match positions");
  if (samples_.size() != endpoints_.size() * grid_.count())
    throw GridMismatchError("field samples do not match endpoints x action grid");
  if (!tracked_means_.empty() && tracked_means_.size() != endpoints_.size())
    throw InvalidArgument("tracked means do not match endpoints");
  check_samples(samples_);
}

std::span<const double> EndpointDensityField::row(std::size_t i) const {
  return std::span<const double>(samples_).subspan(i * grid_.count(), grid_.count());
}

bool EndpointDensityField::row_is_zero(std::size_t i) const {
  const auto r = row(i);
  return std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; });
}

std::optional<double> EndpointDensityField::tracked_mean(std::size_t i) const {
  if (tracked_means_.empty() || !std::isfinite(tracked_means_[i])) return std::nullopt;
  return tracked_means_[i];
}

ActionDensity EndpointDensityField::density(std::size_t i) const {
  const auto r = row(i);
  return ActionDensity(grid_, std::vector<double>(r.begin(), r.end()), initial_,
                       endpoints_.positions[i], duration_, params_, tracked_mean(i));
}

double default_v_max(const LagrangianSpec& lagrangian, double sigma2_rate) {
  return 10.0 * std::sqrt(sigma2_rate) / lagrangian.mass();
}

namespace {

bool within_locality(double a, double b, double dt, double v_max) {
  return std::abs(b - a) <= v_max * dt * (1 + 1e-9);
}

}  // namespace

ActionGrid short_time_action_grid(double dt, const EndpointSet& endpoints,
                                  const LagrangianSpec& lagrangian, double sigma2_rate,
                                  const FieldOptions& opts) {
  if (!(dt > 0)) throw InvalidArgument("duration must be positive");
  if (!(sigma2_rate > 0)) throw InvalidArgument("sigma2_rate must be positive");
  const double v_max = opts.v_max > 0 ? opts.v_max : default_v_max(lagrangian, sigma2_rate);
  const double sd = std::sqrt(sigma2_rate * dt);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double a : endpoints.positions) {
    for (double b : endpoints.positions) {
      if (!within_locality(a, b, dt, v_max)) continue;
      const double s = classical_action(a, b, dt, lagrangian);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  if (!(hi >= lo)) throw InvalidArgument("no endpoint pair inside the locality cutoff");
  const double pad = opts.half_width_sigmas * sd;
  const double spacing = opts.action_spacing ? *opts.action_spacing : sd / opts.points_per_sigma;
  return ActionGrid::covering(lo - pad, hi + pad, spacing);
}

EndpointDensityField short_time_field(double a, double dt, const EndpointSet& endpoints,
                                      const LagrangianSpec& lagrangian, double sigma2_rate,
                                      double hbar, const FieldOptions& opts) {
  if (!(dt > 0)) throw InvalidArgument("duration must be positive");
  if (!(sigma2_rate > 0)) throw InvalidArgument("sigma2_rate must be positive");
  const double v_max = opts.v_max > 0 ? opts.v_max : default_v_max(lagrangian, sigma2_rate);
  const ActionGrid grid = opts.action_grid
                              ? *opts.action_grid
                              : short_time_action_grid(dt, endpoints, lagrangian,
                                                       sigma2_rate, opts);
  const double variance = sigma2_rate * dt;
  const std::size_t n = grid.count();
  std::vector<double> samples(endpoints.size() * n, 0.0);
  std::vector<double> means(endpoints.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    const double b = endpoints.positions[i];
    if (!within_locality(a, b, dt, v_max)) continue;
    means[i] = classical_action(a, b, dt, lagrangian);
    fill_gaussian(grid, means[i], variance, 1.0,
                  std::span<double>(samples).subspan(i * n, n));
  }
  return EndpointDensityField(a, dt, endpoints, grid, std::move(samples),
                              {lagrangian.mass(), hbar, sigma2_rate}, std::move(means));
}

ActionDensity marginal_over_endpoints(const EndpointDensityField& field) {
  const std::size_t n = field.grid().count();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = field.endpoints().weights[i];
    const auto r = field.row(i);
    for (std::size_t j = 0; j < n; ++j) out[j] += w * r[j];
  }
  ActionDensity g(field.grid(), std::move(out), field.initial(),
                  std::numeric_limits<double>::quiet_NaN(), field.duration(), field.params());
  if (!(g.mass() > 0)) throw ZeroMassError("zero total mass in endpoint marginal");
  return g;
}

}  // namespace actlab
