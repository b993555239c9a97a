#include <doctest.h>

#include <cmath>

#include "actlab/errors.hpp"
#include "actlab/inference.hpp"

using namespace actlab;

namespace {

EndpointDensityField single(const ActionDensity& g, double b = 0.0) {
  return EndpointDensityField(0.0, g.duration(), EndpointSet::single(b), g.grid(),
                              {g.samples().begin(), g.samples().end()}, g.params());
}

// Skewed, smooth test density: gamma-like A^2 e^{-A} on A >= 0.
ActionDensity skewed(const ActionGrid& grid) {
  std::vector<double> v(grid.count());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double a = grid[j];
    v[j] = a > 0 ? a * a * std::exp(-a) : 0.0;
  }
  return ActionDensity(grid, v, 0, 0, 1);
}

}  // namespace

TEST_CASE("tilt of a single atom") {
  const ActionGrid grid(-4, 4, 801);
  std::vector<double> v(grid.count(), 0.0);
  const std::size_t i0 = grid.nearest(1.5);
  v[i0] = 2.0 / grid.spacing();
  const auto f = single(ActionDensity(grid, v, 0, 0, 1));
  const double eta = 0.7;
  const auto t = maxent_tilt(f, eta);
  CHECK(t.model.Z == doctest::Approx(2.0 * std::exp(-eta * grid[i0])).epsilon(1e-13));
  CHECK(t.model.mean_A == doctest::Approx(grid[i0]).epsilon(1e-13));
  CHECK(t.model.var_A < 1e-20);
  CHECK(t.model.resolution == doctest::Approx(1 / eta).epsilon(1e-15));
}

TEST_CASE("zero tilt only normalizes") {
  const ActionGrid grid(-2, 12, 1401);
  const auto g = skewed(grid);
  const auto t = maxent_tilt(single(g), 0.0);
  const auto p = tilted_marginal(t);
  const double mass = g.mass();
  for (std::size_t j = 0; j < grid.count(); ++j)
    REQUIRE(p.samples()[j] == doctest::Approx(g.samples()[j] / mass).epsilon(1e-13));
  CHECK(t.model.Z == doctest::Approx(mass).epsilon(1e-13));
  CHECK_FALSE(t.model.warnings.empty());
}

TEST_CASE("gaussian exponential tilt identity") {
  const ActionGrid grid(-14, 16, 3001);
  const double mu = 1.0, s2 = 2.0;
  const auto f = single(gaussian_density(grid, mu, s2, 1, 0, 0, 1));
  for (double eta : {0.1, 0.5, 1.0, 2.0}) {
    const auto t = maxent_tilt(f, eta);
    CHECK(t.model.mean_A == doctest::Approx(mu - eta * s2).epsilon(1e-10));
    CHECK(t.model.var_A == doctest::Approx(s2).epsilon(1e-8));
    CHECK(fisher_information(f, eta) == doctest::Approx(s2).epsilon(1e-8));
    CHECK(t.model.naturalness == doctest::Approx(eta * std::sqrt(s2)).epsilon(1e-8));
    CHECK(tilted_marginal(t).mass() == doctest::Approx(1).epsilon(1e-10));
  }
}

TEST_CASE("fisher information agrees with a finite-difference oracle") {
  const ActionGrid grid(-2, 40, 4201);
  const auto f = single(skewed(grid));
  const double eta = 0.4, h = 1e-4;
  const auto p0 = tilted_marginal(maxent_tilt(f, eta));
  const auto pp = tilted_marginal(maxent_tilt(f, eta + h));
  const auto pm = tilted_marginal(maxent_tilt(f, eta - h));
  double oracle = 0;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    const double p = p0.samples()[j];
    if (p <= 0) continue;
    const double score = (std::log(pp.samples()[j]) - std::log(pm.samples()[j])) / (2 * h);
    oracle += grid.weight(j) * p * score * score;
  }
  const double I = fisher_information(f, eta);
  CHECK(std::abs(I - oracle) < 1e-4 * I);
  // Gamma(3, 1) tilted by eta is Gamma(3, 1 + eta): variance 3 / (1 + eta)^2.
  CHECK(I == doctest::Approx(3 / ((1 + eta) * (1 + eta))).epsilon(1e-5));
}

TEST_CASE("d log Z / d eta is minus the tilted mean") {
  const ActionGrid grid(-2, 40, 4201);
  const auto f = single(skewed(grid));
  for (double eta : {0.1, 0.9, 3.0}) {
    const double h = 1e-5;
    const double d = (maxent_tilt(f, eta + h).model.log_Z - maxent_tilt(f, eta - h).model.log_Z) / (2 * h);
    const double mean = maxent_tilt(f, eta).model.mean_A;
    CHECK(std::abs(d + mean) < 1e-6 * std::abs(mean));
  }
}

TEST_CASE("multi-endpoint tilt normalizes the joint field") {
  const auto space = build_spatial_grid(-2, 2, 21);
  const auto f = short_time_field(0, 0.5, EndpointSet::from_grid(space), LagrangianSpec::free(1), 1);
  const auto t = maxent_tilt(f, 1.3);
  double total = 0;
  for (std::size_t i = 0; i < t.probability.size(); ++i)
    total += t.probability.endpoints().weights[i] * t.probability.row_mass(i);
  CHECK(total == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("large tilts stay finite in the log domain") {
  const ActionGrid grid(-50, 50, 4001);
  const auto f = single(gaussian_density(grid, 0, 25, 1, 0, 0, 1));
  const auto t = maxent_tilt(f, 0.5);  // eta * extent = 50
  CHECK(std::isfinite(t.model.log_Z));
  const auto big = maxent_tilt(f, 20.0);  // eta * extent = 2000
  CHECK(std::isfinite(big.model.log_Z));
  CHECK(std::isfinite(big.model.mean_A));
  CHECK_FALSE(big.model.warnings.empty());
  CHECK(tilted_marginal(big).mass() == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("solve_eta inverts the mean map") {
  const ActionGrid grid(-14, 16, 3001);
  const auto f = single(gaussian_density(grid, 1.0, 2.0, 1, 0, 0, 1));
  // mean = 1 - 2 eta
  CHECK(solve_eta(f, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(solve_eta(f, -2.0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK_THROWS_AS(solve_eta(f, 5.0), ConvergenceError);
}

TEST_CASE("cramer-rao product") {
  auto r = cramer_rao_check(4.0, 0.5);
  CHECK(r.product == doctest::Approx(1));
  CHECK(r.pass);
  r = cramer_rao_check(1.0, 2.0);
  CHECK(r.product == doctest::Approx(2));
  CHECK(r.pass);
  r = cramer_rao_check(1.0, 0.5);
  CHECK(r.product == doctest::Approx(0.5));
  CHECK_FALSE(r.pass);
  CHECK_THROWS_AS(cramer_rao_check(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(cramer_rao_check(1.0, -1.0), InvalidArgument);
  nlohmann::json j = cramer_rao_check(4.0, 0.5);
  CHECK(j["pass"] == true);
}

TEST_CASE("indistinguishability ratios") {
  CHECK(indistinguishability_ratio_fixed(1, 0, 1e-3, 1) == doctest::Approx(1e-3));
  CHECK(indistinguishability_ratio_fixed(2, 2, 1e-3, 1) == 0.0);
  const double r1 = indistinguishability_ratio_fixed(1, 0, 0.01, 3);
  CHECK(std::abs(indistinguishability_ratio_fixed(1, 0, 0.005, 3) - r1 / 2) < 1e-12);

  CHECK(indistinguishability_ratio_diffusive(1, 0, 1e-4, 1) == doctest::Approx(1e-2));
  CHECK(indistinguishability_ratio_diffusive(1, 1, 1e-4, 1) == 0.0);
  const double q = indistinguishability_ratio_diffusive(1, 0, 0.04, 2);
  CHECK(std::abs(indistinguishability_ratio_diffusive(1, 0, 0.01, 2) / q - 0.5) < 1e-12);
  CHECK_THROWS_AS(indistinguishability_ratio_fixed(1, 0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(indistinguishability_ratio_diffusive(1, 0, 1, 0), InvalidArgument);

  std::vector<double> dts, fixed, diff;
  for (int i = 0; i <= 8; ++i) {
    const double dt = std::pow(10.0, -6 + 0.5 * i);
    dts.push_back(dt);
    fixed.push_back(indistinguishability_ratio_fixed(1.5, 0.2, dt, 2));
    diff.push_back(indistinguishability_ratio_diffusive(1.5, 0.2, dt, 0.3));
  }
  CHECK(std::abs(log_log_slope(dts, fixed) - 1) < 0.01);
  CHECK(std::abs(log_log_slope(dts, diff) - 0.5) < 0.01);
}

TEST_CASE("log-log slope input checks") {
  const std::vector<double> x{1, 2}, y{1, -1}, one{1};
  CHECK_THROWS_AS(log_log_slope(x, y), InvalidArgument);
  CHECK_THROWS_AS(log_log_slope(one, one), InvalidArgument);
}
