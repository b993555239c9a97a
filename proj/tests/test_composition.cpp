#include <doctest.h>

#include <cmath>
#include <numbers>

#include "actlab/composition.hpp"
#include "actlab/errors.hpp"

using namespace actlab;

namespace {

constexpr double kPi = std::numbers::pi;

double l1(const ActionDensity& x, const ActionDensity& y) {
  REQUIRE(x.grid().same_as(y.grid()));
  std::vector<double> d(x.samples().size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::abs(x.samples()[j] - y.samples()[j]);
  return x.grid().integrate(d);
}

double excess_kurtosis(const ActionDensity& g) {
  const double mean = mean_action(g);
  double m0 = 0, m2 = 0, m4 = 0;
  for (std::size_t j = 0; j < g.grid().count(); ++j) {
    const double w = g.grid().weight(j) * g.samples()[j];
    const double d = g.grid()[j] - mean;
    m0 += w;
    m2 += w * d * d;
    m4 += w * d * d * d * d;
  }
  m2 /= m0;
  m4 /= m0;
  return m4 / (m2 * m2) - 3;
}

// Spatial grid wide enough that no hop from 0 over `steps` steps leaves it.
SpatialGrid hop_grid(double v_max, double dt, int steps) {
  const double hop = v_max * dt;
  const double reach = steps * hop + hop;
  return SpatialGrid(-reach, reach, static_cast<std::size_t>(std::llround(10 * reach / hop)) + 1);
}

ActionDensity window(const ActionGrid& grid, double lambda, double width) {
  std::vector<double> v(grid.count(), 0.0);
  for (std::size_t j = 0; j < grid.count(); ++j)
    if (grid[j] >= 0 && grid[j] <= width) v[j] = std::exp(-grid[j] / lambda);
  return ActionDensity(grid, std::move(v), 0, 0, 1);
}

}  // namespace

TEST_CASE("gaussian convolution identity at a fixed intermediate point") {
  const ActionGrid grid(-15, 15, 3001);
  const auto g1 = gaussian_density(grid, 0.7, 0.5, 1, 0, 0, 1);
  const auto g2 = gaussian_density(grid, -1.1, 1.5, 2, 0, 0, 1);
  const auto c = convolve_densities(g1, g2);
  CHECK(c.grid().count() == 2 * grid.count() - 1);
  CHECK(c.grid().min() == doctest::Approx(-30));
  const auto expect = gaussian_density(c.grid(), -0.4, 2.0, 2, 0, 0, 2);
  CHECK(l1(c, expect) < 1e-10);
  CHECK(mean_action(c) == doctest::Approx(-0.4).epsilon(1e-10));
  CHECK(variance_action(c) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fft and direct convolution agree") {
  const ActionGrid grid(-2, 10, 601);
  const auto g1 = window(grid, 0.7, 4.0), g2 = window(grid, 1.9, 3.0);
  const auto f = convolve_densities(g1, g2);
  const auto d = convolve_densities(g1, g2, {ConvolutionMethod::direct});
  double peak = 0, diff = 0;
  for (std::size_t j = 0; j < f.samples().size(); ++j) {
    peak = std::max(peak, d.samples()[j]);
    diff = std::max(diff, std::abs(f.samples()[j] - d.samples()[j]));
  }
  CHECK(diff < 1e-13 * peak);
}

TEST_CASE("convolution commutes and associates") {
  const ActionGrid grid(-3, 9, 481);
  const auto g1 = window(grid, 0.7, 4.0);
  const auto g2 = gaussian_density(grid, 1.0, 0.3, 1, 0, 0, 1);
  const auto g3 = window(grid, 2.5, 2.0);
  const auto a = convolve_densities(g1, g2), b = convolve_densities(g2, g1);
  double peak = 0, diff = 0;
  for (std::size_t j = 0; j < a.samples().size(); ++j) {
    peak = std::max(peak, a.samples()[j]);
    diff = std::max(diff, std::abs(a.samples()[j] - b.samples()[j]));
  }
  CHECK(diff <= 1e-12 * peak);
  const auto left = convolve_densities(convolve_densities(g1, g2), g3);
  const auto right = convolve_densities(g1, convolve_densities(g2, g3));
  CHECK(l1(left, right) < 1e-10);
  // Means add.
  const double m = mean_action(g1) + mean_action(g2) + mean_action(g3);
  CHECK(std::abs(mean_action(left) - m) < 1e-10 * std::abs(m));
}

TEST_CASE("variance additivity") {
  const ActionGrid grid(-20, 20, 4001);
  SUBCASE("gaussians of variance 1 and 2") {
    const auto g1 = gaussian_density(grid, 0, 1, 1, 0, 0, 1);
    const auto g2 = gaussian_density(grid, 0, 2, 1, 0, 0, 1);
    const auto r = check_variance_additivity(g1, g2, convolve_densities(g1, g2));
    CHECK(r.variance_composed == doctest::Approx(3).epsilon(1e-10));
    CHECK(r.additivity_residual < 1e-8);
  }
  SUBCASE("identical gaussians double the variance") {
    const auto g = gaussian_density(grid, 0.3, 0.8, 1, 0, 0, 1);
    CHECK(variance_action(convolve_densities(g, g)) == doctest::Approx(1.6).epsilon(1e-10));
  }
  SUBCASE("exponential windows") {
    const ActionGrid wg(-2, 10, 1201);
    const auto g1 = window(wg, 0.7, 4.0), g2 = window(wg, 1.9, 3.0);
    const auto c = convolve_densities(g1, g2);
    const auto r = check_variance_additivity(g1, g2, c);
    CHECK(r.additivity_residual < 1e-6);
    // Oracle: sampled variances of the discrete inputs, computed here.
    auto var = [](const ActionDensity& g) {
      double s0 = 0, s1 = 0, s2 = 0;
      for (std::size_t j = 0; j < g.grid().count(); ++j) {
        const double w = g.grid().weight(j) * g.samples()[j];
        s0 += w;
        s1 += w * g.grid()[j];
        s2 += w * g.grid()[j] * g.grid()[j];
      }
      return s2 / s0 - (s1 / s0) * (s1 / s0);
    };
    CHECK(r.variance_in_parts == doctest::Approx(var(g1) + var(g2)).epsilon(1e-12));
  }
  SUBCASE("zero variance is rejected") {
    const ActionGrid tiny(-1, 1, 17);
    std::vector<double> v(17, 0.0);
    v[8] = 1 / tiny.spacing();
    const ActionDensity spike(tiny, v, 0, 0, 1);
    CHECK_THROWS_AS(check_variance_additivity(spike, spike, convolve_densities(spike, spike)),
                    InvalidArgument);
  }
}

TEST_CASE("discrete delta is the identity element of compose_fields") {
  const auto free = LagrangianSpec::free(1);
  const auto space = build_spatial_grid(-2, 2, 41);
  const auto ends = EndpointSet::from_grid(space);
  FieldOptions fo;
  fo.v_max = 10;
  const ActionGrid grid = short_time_action_grid(0.5, ends, free, 1, fo);
  fo.action_grid = grid;

  std::vector<double> delta(grid.count(), 0.0);
  const std::size_t zero = grid.nearest(0.0);
  delta[zero] = 1 / grid.spacing();
  const EndpointDensityField first(0.0, 0.1, EndpointSet::single(0.3), grid, delta);
  const double shift = grid[zero];

  const auto second = short_time_field(0.3, 0.5, ends, free, 1, 1, fo);
  const auto out = compose_fields(first, [&](double) { return second; });
  CHECK(out.duration() == doctest::Approx(0.6));
  double worst = 0;
  for (std::size_t ic = 0; ic < second.size(); ++ic) {
    const auto r2 = second.row(ic);
    const auto ro = out.row(ic);
    for (std::size_t j = 0; j < r2.size(); ++j) {
      const double A = grid[j] + shift;
      worst = std::max(worst, std::abs(ro[out.grid().nearest(A)] - r2[j]));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("two half steps against direct quadrature of the composition law") {
  // Each pair of Gaussians convolves to a Gaussian exactly, so the composed
  // marginal is a double sum of analytic Gaussians over b and c.
  const double T = 0.5, var = T;
  const auto free = LagrangianSpec::free(1);
  const auto space = build_spatial_grid(-12, 12, 97);
  FieldOptions fo;
  fo.v_max = 10;
  const auto builder = gaussian_field_builder(free, 1, 1, EndpointSet::from_grid(space), fo);
  const auto m = marginal_over_endpoints(iterate_short_time(builder, 0, 2, T));

  const double cut = fo.v_max * T * (1 + 1e-9);
  // Oracle on a 4x finer action grid, compared by interpolation-free
  // sub-sampling at the library's grid points.
  const auto& grid = m.grid();
  const std::size_t fine = 4 * (grid.count() - 1) + 1;
  std::vector<double> oracle(fine, 0.0);
  const double hf = grid.spacing() / 4;
  for (std::size_t ib = 0; ib < space.count(); ++ib) {
    const double b = space[ib];
    if (std::abs(b) > cut) continue;
    for (std::size_t ic = 0; ic < space.count(); ++ic) {
      const double c = space[ic];
      if (std::abs(c - b) > cut) continue;
      const double mu = b * b / (2 * T) + (c - b) * (c - b) / (2 * T);
      const double w = space.weight(ib) * space.weight(ic) / std::sqrt(2 * kPi * 2 * var);
      for (std::size_t j = 0; j < fine; ++j) {
        const double d = grid.min() + j * hf - mu;
        oracle[j] += w * std::exp(-d * d / (4 * var));
      }
    }
  }
  double err = 0, mass = 0;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    err += grid.weight(j) * std::abs(m.samples()[j] - oracle[4 * j]);
    mass += grid.weight(j) * oracle[4 * j];
  }
  CHECK(err / mass < 1e-4);
  // And the oracle's own fine-grid mass agrees with the coarse one.
  double fine_mass = 0;
  for (std::size_t j = 0; j < fine; ++j) fine_mass += (j == 0 || j + 1 == fine ? 0.5 : 1) * hf * oracle[j];
  CHECK(fine_mass == doctest::Approx(mass).epsilon(1e-10));
}

TEST_CASE("iterated free field") {
  const auto free = LagrangianSpec::free(1);
  const double dt = 0.125;
  SUBCASE("one step is the builder output") {
    const auto grid = hop_grid(10, dt, 1);
    FieldOptions fo;
    fo.v_max = 10;
    const auto builder = gaussian_field_builder(free, 1, 1, EndpointSet::from_grid(grid), fo);
    const auto a = iterate_short_time(builder, 0, 1, dt), b = builder(0, dt);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.grid().count(); ++j) REQUIRE(a.row(i)[j] == b.row(i)[j]);
    const auto two = iterate_short_time(builder, 0, 2, dt);
    const auto manual = compose_fields(b, [&](double from) { return builder(from, dt); });
    for (std::size_t i = 0; i < two.size(); ++i)
      for (std::size_t j = 0; j < two.grid().count(); ++j) REQUIRE(two.row(i)[j] == manual.row(i)[j]);
    CHECK_THROWS_AS(iterate_short_time(builder, 0, 0, dt), InvalidArgument);
  }
  SUBCASE("variance of N = 8 steps is 8 single-step variances") {
    const auto grid = hop_grid(10, dt, 8);
    FieldOptions fo;
    fo.v_max = 10;
    const auto builder = gaussian_field_builder(free, 1, 1, EndpointSet::from_grid(grid), fo);
    const double v1 = variance_action(marginal_over_endpoints(builder(0, dt)));
    const auto m8 = marginal_over_endpoints(iterate_short_time(builder, 0, 8, dt));
    CHECK(std::abs(variance_action(m8) - 8 * v1) < 1e-6 * 8 * v1);
    const double mu1 = mean_action(marginal_over_endpoints(builder(0, dt)));
    CHECK(std::abs(mean_action(m8) - 8 * mu1) < 1e-10 * 8 * mu1);
  }
  SUBCASE("diffusive regime stays gaussian") {
    // A small locality cutoff makes each step nearly Gaussian in action;
    // kurtosis then decays with the number of steps.
    const double v_max = 1;
    const auto grid = hop_grid(v_max, dt, 8);
    FieldOptions fo;
    fo.v_max = v_max;
    const auto builder = gaussian_field_builder(free, 1, 1, EndpointSet::from_grid(grid), fo);
    const auto m8 = marginal_over_endpoints(iterate_short_time(builder, 0, 8, dt));
    CHECK(std::abs(excess_kurtosis(m8)) < 1e-4);
  }
}

TEST_CASE("levy exponent") {
  const ActionGrid grid(-20, 30, 5001);
  const double mu = 0.8, s2 = 1.3, T = 2.0;
  const auto g = gaussian_density(grid, mu * T, s2 * T, 2.5, 0, 0, T);
  std::vector<double> k;
  for (int i = -30; i <= 30; ++i) k.push_back(i * 0.1);
  const auto psi = levy_exponent(g, T, k);
  double worst = 0;
  for (std::size_t i = 0; i < k.size(); ++i)
    worst = std::max(worst, std::abs(psi[i] - std::complex<double>(-s2 * k[i] * k[i] / 2, mu * k[i])));
  CHECK(worst < 1e-8);
  const std::vector<double> zero{0.0};
  CHECK(std::abs(levy_exponent(g, T, zero)[0]) < 1e-14);
  CHECK(std::abs(characteristic_function(g, zero)[0] - 1.0) < 1e-14);
  const std::vector<double> far{0.0, 5.0, 10.0};
  CHECK_THROWS_AS(levy_exponent(g, T, far), NumericalError);
  CHECK_THROWS_AS(levy_exponent(g, 0, zero), InvalidArgument);
}

TEST_CASE("levy exponent of the iterated free marginal is linear in T") {
  const auto free = LagrangianSpec::free(1);
  const double dt = 0.125;
  const auto grid = hop_grid(10, dt, 8);
  FieldOptions fo;
  fo.v_max = 10;
  const auto builder = gaussian_field_builder(free, 1, 1, EndpointSet::from_grid(grid), fo);
  const auto m4 = marginal_over_endpoints(iterate_short_time(builder, 0, 4, dt));
  const auto m8 = marginal_over_endpoints(iterate_short_time(builder, 0, 8, dt));
  const double sd = std::sqrt(variance_action(m8));
  std::vector<double> k;
  for (int i = -50; i <= 50; ++i) k.push_back(5.0 / sd * i / 50.0);
  CHECK(levy_linearity_residual(m4, 0.5, m8, 1.0, k) < 1e-6);
}

TEST_CASE("composition errors") {
  const ActionGrid a(-1, 1, 101), b(-1, 1, 51);
  const auto ga = gaussian_density(a, 0, 0.04, 1, 0, 0, 1);
  const auto gb = gaussian_density(b, 0, 0.16, 1, 0, 0, 1);
  CHECK_THROWS_AS(convolve_densities(ga, gb), GridMismatchError);
  // Flat densities fill the output grid up to its edges.
  const ActionDensity flat(a, std::vector<double>(101, 1.0), 0, 0, 1);
  CHECK_THROWS_AS(convolve_densities(flat, flat), AliasingError);
}

TEST_CASE("composition report serializes") {
  nlohmann::json j = CompositionReport{1, 2, 3, 4};
  CHECK(j["variance_in_parts"] == 1.0);
  CHECK(j["levy_linearity_residual"] == 4.0);
}
