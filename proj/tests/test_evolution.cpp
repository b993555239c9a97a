#include <doctest.h>

#include <cmath>
#include <numbers>

#include "actlab/errors.hpp"
#include "actlab/evolution.hpp"
#include "actlab/reference.hpp"

using namespace actlab;

namespace {

constexpr double kPi = std::numbers::pi;

WaveFunction packet(const SpatialGrid& grid, double sigma, double x0, double p0, double m = 1) {
  return WaveFunction(grid, free_packet({m, 1.0, sigma, x0, p0}, grid, 0.0), 1.0);
}

double l2_distance(const SpatialGrid& grid, std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(a[i] - b[i]);
  return std::sqrt(grid.integrate(d));
}

double mean_residual(EvolutionTrace trace, const LagrangianSpec& L) {
  const auto r = schrodinger_residual(trace, L);
  double s = 0;
  int n = 0;
  for (double v : r)
    if (std::isfinite(v)) s += v, ++n;
  return s / n;
}

}  // namespace

TEST_CASE("wavefunction basics") {
  const auto grid = build_spatial_grid(-20, 20, 256);
  const auto psi = packet(grid, 1, 0, 1);
  CHECK(psi.norm() == doctest::Approx(1).epsilon(1e-12));
  CHECK(psi.band_limited());
  CHECK(psi.out_of_band_fraction() < 1e-10);
  // A spike has flat spectrum.
  std::vector<cplx> spike(grid.count());
  spike[128] = 1;
  CHECK_FALSE(WaveFunction(grid, spike, 1).band_limited());
  const auto two = combine(2.0, psi, cplx(0, 1), psi);
  CHECK(two.norm() == doctest::Approx(5).epsilon(1e-12));
  CHECK_THROWS(WaveFunction(grid, std::vector<cplx>(3), 1));
}

TEST_CASE("free evolution is unitary and matches the closed-form packet") {
  const auto grid = build_spatial_grid(-20, 20, 256);
  const auto L = LagrangianSpec::free(1);
  const auto k = band_limited_short_time(L, 0.01, 1, grid);
  const auto psi0 = packet(grid, 1, -2, 1);
  const auto trace = evolve(k, psi0, 100);
  REQUIRE(trace.snapshots.size() == 101);
  double worst = 0, step = 0;
  for (std::size_t n = 0; n < trace.norms.size(); ++n) {
    worst = std::max(worst, std::abs(trace.norms[n] - 1));
    if (n) step = std::max(step, std::abs(trace.norms[n] - trace.norms[n - 1]));
  }
  CHECK(worst < 1e-6);
  CHECK(step < 1e-8);
  CHECK(trace.snapshots.back().time() == doctest::Approx(1.0));
  const auto exact = free_packet({1, 1, 1, -2, 1}, grid, 1.0);
  CHECK(l2_distance(grid, trace.snapshots.back().samples(), exact) < 1e-8);

  const auto one = evolve(k, psi0, 1);
  const auto direct = apply_kernel(k, psi0);
  CHECK(l2_distance(grid, one.snapshots[1].samples(), direct.samples()) == 0.0);
  CHECK_THROWS(evolve(k, psi0, 0));
}

TEST_CASE("norm drift aborts") {
  const auto grid = build_spatial_grid(-10, 10, 64);
  const auto id = identity_kernel(grid, 1);
  std::vector<cplx> e(id.entries().begin(), id.entries().end());
  for (auto& v : e) v *= 1.01;
  const Kernel leaky(grid, e, 0.1, 1, KernelProvenance::composed);
  try {
    evolve(leaky, packet(grid, 1, 0, 0), 10);
    FAIL("expected NormDriftError");
  } catch (const NormDriftError& err) {
    CHECK(err.step() == 1);
    CHECK(err.norm() == doctest::Approx(1.0201).epsilon(1e-9));
  }
}

TEST_CASE("harmonic coherent state returns after one period") {
  const auto grid = build_spatial_grid(-8, 8, 128);
  const auto L = LagrangianSpec::harmonic(1, 1);
  const double dt = 5e-4;
  const int steps = static_cast<int>(std::llround(2 * kPi / dt));
  const auto k = band_limited_short_time(L, dt, 1, grid);
  const WaveFunction psi0(grid, coherent_state({1, 1, 1, 1.0, 0.0}, grid, 0.0), 1);
  const auto trace = evolve(k, psi0, steps);
  const auto x_end = expectations(trace.snapshots.back(), L).x;
  CHECK(std::abs(x_end - 1.0) < 1e-3);
  // Quarter period: centre at x0 cos(pi/2) = 0 and momentum -m omega x0.
  const auto q = expectations(trace.snapshots[steps / 4], L);
  CHECK(std::abs(q.x - coherent_centre({1, 1, 1, 1, 0}, (steps / 4) * dt)) < 1e-3);
  CHECK(q.p == doctest::Approx(-1).epsilon(2e-3));
}

TEST_CASE("energy is conserved") {
  const auto grid = build_spatial_grid(-8, 8, 128);
  for (const auto& L : {LagrangianSpec::free(1), LagrangianSpec::harmonic(1, 1)}) {
    const auto k = band_limited_short_time(L, 1e-3, 1, grid);
    const WaveFunction psi0(grid, coherent_state({1, 1, 1, 0.5, 0.5}, grid, 0.0), 1);
    const auto trace = evolve(k, psi0, 100);
    const double e0 = expectations(trace.snapshots.front(), L).energy;
    double worst = 0;
    for (const auto& s : trace.snapshots) worst = std::max(worst, std::abs(expectations(s, L).energy - e0));
    CHECK(worst < 1e-4 * std::abs(e0));
  }
  // Closed form for the displaced coherent state: hbar omega / 2 + (p0^2 + x0^2) / 2.
  const WaveFunction c(grid, coherent_state({1, 1, 1, 0.5, 0.5}, grid, 0.0), 1);
  CHECK(expectations(c, LagrangianSpec::harmonic(1, 1)).energy == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("galilean boost shifts the centre by u t") {
  const auto grid = build_spatial_grid(-20, 20, 256);
  const auto L = LagrangianSpec::free(1);
  const auto k = band_limited_short_time(L, 0.01, 1, grid);
  const auto rest = packet(grid, 1, 0, 0);
  const double u = 1.5;
  std::vector<cplx> boosted(rest.samples().begin(), rest.samples().end());
  for (std::size_t i = 0; i < boosted.size(); ++i) boosted[i] *= std::polar(1.0, u * grid[i]);
  const auto a = evolve(k, rest, 100).snapshots.back();
  const auto b = evolve(k, WaveFunction(grid, boosted, 1), 100).snapshots.back();
  CHECK(std::abs(expectations(b, L).x - expectations(a, L).x - u * 1.0) < 1e-4);
}

TEST_CASE("spectral derivatives") {
  const auto grid = build_spatial_grid(-16, 16, 384);
  const auto psi = packet(grid, 1, 0.3, 2);
  const auto d1 = spectral_derivative(grid, psi.samples());
  const auto d2 = spectral_second_derivative(grid, psi.samples());
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    // psi = exp(-(x-x0)^2/4 + i p x) for sigma = 1, times a constant.
    const cplx g = cplx(-(grid[i] - 0.3) / 2, 2.0);
    const cplx f = psi.samples()[i];
    e1 = std::max(e1, std::abs(d1[i] - g * f));
    e2 = std::max(e2, std::abs(d2[i] - (g * g - 0.5) * f));
  }
  CHECK(e1 < 1e-10);
  CHECK(e2 < 1e-9);
}

TEST_CASE("schrodinger residual convergence") {
  SUBCASE("free: exact band propagator leaves only the centred-difference error") {
    const auto grid = build_spatial_grid(-20, 20, 256);
    const auto L = LagrangianSpec::free(1);
    auto run = [&](double dt, int n) {
      return evolve(band_limited_short_time(L, dt, 1, grid), packet(grid, 1, 0, 1), n);
    };
    const double ratio = mean_residual(run(0.01, 20), L) / mean_residual(run(0.005, 40), L);
    CHECK(ratio == doctest::Approx(4).epsilon(0.05));
  }
  SUBCASE("harmonic: first order") {
    const auto grid = build_spatial_grid(-8, 8, 128);
    const auto L = LagrangianSpec::harmonic(1, 1);
    const WaveFunction psi0(grid, coherent_state({1, 1, 1, 1.0, 0.0}, grid, 0.0), 1);
    auto run = [&](double dt, int n) { return evolve(band_limited_short_time(L, dt, 1, grid), psi0, n); };
    const double ratio = mean_residual(run(0.01, 20), L) / mean_residual(run(0.005, 40), L);
    CHECK(std::abs(ratio - 2) < 0.2);
  }
  SUBCASE("end entries are NaN and stored in the trace") {
    const auto grid = build_spatial_grid(-20, 20, 128);
    const auto L = LagrangianSpec::free(1);
    auto trace = evolve(band_limited_short_time(L, 0.01, 1, grid), packet(grid, 1, 0, 1), 4);
    const auto r = schrodinger_residual(trace, L);
    CHECK(r.size() == 5);
    CHECK(std::isnan(r.front()));
    CHECK(std::isnan(r.back()));
    CHECK(trace.residuals.size() == 5);
    auto short_trace = evolve(band_limited_short_time(L, 0.01, 1, grid), packet(grid, 1, 0, 1), 1);
    CHECK_THROWS(schrodinger_residual(short_trace, L));
  }
  SUBCASE("broad packet at rest has a small residual") {
    const auto grid = build_spatial_grid(-40, 40, 256);
    const auto L = LagrangianSpec::free(1);
    auto trace = evolve(band_limited_short_time(L, 0.01, 1, grid), packet(grid, 4, 0, 0), 10);
    CHECK(mean_residual(trace, L) < 1e-5);
  }
  SUBCASE("constant potential shift is a global phase") {
    const auto grid = build_spatial_grid(-20, 20, 128);
    const auto L = LagrangianSpec::harmonic(1, 0.2);
    const auto Ls = L.shifted(0.7);
    const auto psi0 = packet(grid, 1, 0, 1);
    const auto t1 = evolve(band_limited_short_time(L, 0.01, 1, grid), psi0, 6);
    const auto t2 = evolve(band_limited_short_time(Ls, 0.01, 1, grid), psi0, 6);
    // Undo e^{-i c t / hbar} and compare residuals computed against each H.
    EvolutionTrace fixed = t2;
    for (std::size_t n = 0; n < fixed.snapshots.size(); ++n)
      fixed.snapshots[n] = t2.snapshots[n].scaled(std::polar(1.0, 0.7 * t2.snapshots[n].time()));
    CHECK(mean_residual(t1, L) == doctest::Approx(mean_residual(fixed, L)).epsilon(1e-8));
  }
}

TEST_CASE("gaussian integrals on the rotated contour") {
  const auto r = gaussian_integral_check(1, 1, 0.1);
  CHECK(std::abs(r.zeroth - 1.0) < 1e-8);
  CHECK(std::abs(r.second - cplx(0, 0.1)) < 1e-8);
  CHECK(r.truncation_ok);
  const auto r2 = gaussian_integral_check(1, 1, 0.2);
  CHECK(std::abs(r2.second - 2.0 * r.second) < 1e-12);
  const auto rm = gaussian_integral_check(2, 1, 0.1);
  CHECK(std::abs(rm.second - 0.5 * r.second) < 1e-12);
  GaussianIntegralOptions narrow;
  narrow.half_width_sigmas = 2;
  CHECK_FALSE(gaussian_integral_check(1, 1, 0.1, narrow).truncation_ok);
  CHECK_THROWS(gaussian_integral_check(1, 1, 0));
  // The real-axis integrand does not decay; truncation error stays O(1/L).
  CHECK(std::abs(gaussian_integral_real_axis(1, 1, 0.1, 5, 20001) - 1.0) > 1e-3);
}

TEST_CASE("canonical commutator") {
  const auto grid = build_spatial_grid(-20, 20, 256);
  CHECK(commutator_check(packet(grid, 1, 0, 0)).residual < 1e-6);
  CHECK(commutator_check(packet(grid, 1.5, 2, -1)).residual < 1e-6);
  std::vector<cplx> pw(grid.count());
  for (std::size_t i = 0; i < pw.size(); ++i)
    pw[i] = std::polar(std::exp(-0.5 * grid[i] * grid[i] / 4), 0.2 * kPi / grid.spacing() * grid[i]);
  CHECK(commutator_check(WaveFunction(grid, pw, 1)).residual < 1e-5);
  const auto zero = commutator_check(WaveFunction(grid, std::vector<cplx>(grid.count()), 1));
  CHECK(zero.residual == 0.0);
  CHECK(zero.degenerate);
  CHECK_THROWS_AS(commutator_check(packet(grid, 1, 19, 0)), InvalidArgument);
}
