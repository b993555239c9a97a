#include "actlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actlab/action_density.hpp"
#include "actlab/calibration.hpp"
#include "actlab/classical.hpp"
#include "actlab/composition.hpp"
#include "actlab/errors.hpp"
#include "actlab/evolution.hpp"
#include "actlab/inference.hpp"
#include "actlab/path_oracle.hpp"
#include "actlab/propagator.hpp"
#include "actlab/reference.hpp"

namespace actlab {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

double opt(const Scenario& s, const std::string& check, const std::string& key, double def) {
  return s.option(check, key, def);
}

// Initial packet for evolution checks: coherent state for the harmonic
// system, a Gaussian of width extent/40 otherwise.
WaveFunction initial_state(const Scenario& s, const SpatialGrid& grid, double p0) {
  std::vector<cplx> psi;
  if (s.system == "harmonic") {
    psi = coherent_state({s.m, s.omega, s.hbar, 1.0, 0.0}, grid, 0.0);
  } else {
    psi = free_packet({s.m, s.hbar, grid.extent() / 40, 0.5 * (grid.min() + grid.max()), p0},
                      grid, 0.0);
  }
  WaveFunction w(grid, std::move(psi), s.hbar);
  return w.scaled(1.0 / std::sqrt(w.norm()));
}

// Free field builder with the scenario's mass and action-noise rate.
FieldBuilder free_builder(const Scenario& s, const SpatialGrid& grid, double v_max) {
  FieldOptions fo;
  fo.v_max = v_max;
  return gaussian_field_builder(LagrangianSpec::free(s.m), s.sigma2_rate(), s.hbar,
                                EndpointSet::from_grid(grid), fo);
}

// Spatial grid wide enough that `steps` short-time hops from 0 never see
// the boundary: translation invariance then makes marginals compose exactly.
SpatialGrid hop_grid(double v_max, double dt, int steps) {
  const double hop = v_max * dt;
  const double reach = steps * hop + hop;
  const double dx = hop / 5;
  return SpatialGrid(-reach, reach, static_cast<std::size_t>(std::llround(2 * reach / dx)) + 1);
}

CheckOutcome check_semigroup(const Scenario& s) {
  const double dt = opt(s, "semigroup", "dt", 1.0);
  const auto grid = s.grid();
  const auto free = LagrangianSpec::free(s.m);
  const auto half = analytic_short_time(free, dt / 2, s.hbar, grid);
  const auto full = analytic_short_time(free, dt, s.hbar, grid);
  const auto composed = compose_kernels(half, half);
  const auto probes = probe_packets(grid, s.hbar);
  const double op = operator_relative_error(composed, full, probes);

  // Density-level composition report on a short free iteration.
  const double ddt = opt(s, "semigroup", "density_dt", 0.125);
  const double v_max = default_v_max(free, s.sigma2_rate());
  const auto hg = hop_grid(v_max, ddt, 2);
  const auto builder = free_builder(s, hg, v_max);
  const auto m1 = marginal_over_endpoints(builder(0.0, ddt));
  const auto m2 = marginal_over_endpoints(iterate_short_time(builder, 0.0, 2, ddt));
  auto report = check_variance_additivity(m1, m1, m2);
  const double sd = std::sqrt(variance_action(m2));
  std::vector<double> k;
  for (int i = -40; i <= 40; ++i) k.push_back(5.0 / sd * i / 40.0);
  report.levy_linearity_residual = levy_linearity_residual(m1, ddt, m2, 2 * ddt, k);
  return {op,
          {{"dt", dt},
           {"operator_relative_l2", op},
           {"pointwise_relative_frobenius", pointwise_relative_error(composed, full)},
           {"probes", probes.size()},
           {"composition", report}}};
}

CheckOutcome check_variance_additivity(const Scenario& s) {
  const MassParams mp{s.m, s.hbar, s.sigma2_rate()};
  double worst = 0;
  json cases = json::array();
  {
    const ActionGrid grid(-20, 20, 4001);
    const auto g1 = gaussian_density(grid, 0.5, 1.0, 1.0, 0, 0, 1, mp);
    const auto g2 = gaussian_density(grid, -0.3, 2.0, 1.0, 0, 0, 2, mp);
    const auto r = check_variance_additivity(g1, g2, convolve_densities(g1, g2));
    worst = std::max(worst, r.additivity_residual);
    cases.push_back({{"pair", "gaussian var 1 + var 2"}, {"report", r}});
  }
  {
    // Exponential windows: one-sided, skewed, discontinuous at the origin.
    const ActionGrid grid(-2, 10, 1201);
    auto window = [&](double lambda, double width) {
      std::vector<double> v(grid.count(), 0.0);
      for (std::size_t j = 0; j < grid.count(); ++j)
        if (grid[j] >= 0 && grid[j] <= width) v[j] = std::exp(-grid[j] / lambda);
      return ActionDensity(grid, std::move(v), 0, 0, 1, mp);
    };
    const auto g1 = window(0.7, 4.0);
    const auto g2 = window(1.9, 3.0);
    const auto r = check_variance_additivity(g1, g2, convolve_densities(g1, g2));
    worst = std::max(worst, r.additivity_residual);
    cases.push_back({{"pair", "exponential windows"}, {"report", r}});
  }
  {
    // Iterated free field marginal: Var(N steps) = N Var(1 step).
    const int steps = static_cast<int>(opt(s, "variance-additivity", "steps", 8));
    const double dt = opt(s, "variance-additivity", "dt", 0.125);
    const double v_max = default_v_max(LagrangianSpec::free(s.m), s.sigma2_rate());
    const auto grid = hop_grid(v_max, dt, steps);
    const auto builder = free_builder(s, grid, v_max);
    const double v1 = variance_action(marginal_over_endpoints(builder(0.0, dt)));
    const double vn =
        variance_action(marginal_over_endpoints(iterate_short_time(builder, 0.0, steps, dt)));
    const double r = std::abs(vn - steps * v1) / (steps * v1);
    worst = std::max(worst, r);
    cases.push_back({{"pair", "iterated free marginal"},
                     {"steps", steps},
                     {"ratio", vn / v1},
                     {"residual", r}});
  }
  return {worst, {{"cases", cases}}};
}

CheckOutcome check_levy(const Scenario& s) {
  const double dt = opt(s, "levy-linearity", "dt", 0.125);
  const int n1 = static_cast<int>(opt(s, "levy-linearity", "steps", 4));
  const double v_max = default_v_max(LagrangianSpec::free(s.m), s.sigma2_rate());
  const auto grid = hop_grid(v_max, dt, 2 * n1);
  const auto builder = free_builder(s, grid, v_max);
  const auto f1 = iterate_short_time(builder, 0.0, n1, dt);
  const FieldFamily fam = [&](double from) { return iterate_short_time(builder, from, n1, dt); };
  const auto m1 = marginal_over_endpoints(f1);
  const auto m2 = marginal_over_endpoints(iterate_short_time(builder, 0.0, 2 * n1, dt));
  const double t = n1 * dt;
  const double sd = std::sqrt(variance_action(m2));
  std::vector<double> k;
  for (int i = -50; i <= 50; ++i) k.push_back(5.0 / sd * i / 50.0);
  const double r = levy_linearity_residual(m1, t, m2, 2 * t, k);
  return {r, {{"T", t}, {"k_max", 5.0 / sd}, {"sigma_2T", sd}}};
}

CheckOutcome check_gaussian_kernel(const Scenario& s) {
  const double dt = opt(s, "gaussian-kernel", "dt", 0.1);
  const auto L = s.lagrangian();
  double worst = 0;
  json rows = json::array();
  for (double b : {-1.0, 0.0, 0.5, 1.0}) {
    const auto g = gaussian_short_time(0.0, b, dt, L, s.sigma2_rate(), s.hbar);
    const cplx k = kernel_value(g, s.eta());
    const double scl = classical_action(0.0, b, dt, L);
    const double var = s.sigma2_rate() * dt;
    const cplx expect =
        g.mass() * std::exp(cplx(-var / (2 * s.hbar * s.hbar), scl / s.hbar));
    const double r = std::abs(k - expect) / std::abs(expect);
    worst = std::max(worst, r);
    rows.push_back({{"b", b}, {"relative_error", r}});
  }
  return {worst, {{"dt", dt}, {"endpoints", rows}}};
}

struct EvolutionRun {
  EvolutionTrace trace;
  LagrangianSpec lagrangian;
};

EvolutionRun run_evolution(const Scenario& s, double dt, int steps) {
  const auto grid = s.grid();
  const auto L = s.lagrangian();
  const auto k = band_limited_short_time(L, dt, s.hbar, grid, kBandFraction);
  const double p0 = s.system == "harmonic" ? 0.0 : s.hbar;
  return {evolve(k, initial_state(s, grid, p0), steps), L};
}

CheckOutcome check_unitarity(const Scenario& s) {
  const auto run = run_evolution(s, s.dt, s.steps);
  double worst = 0;
  for (double n : run.trace.norms) worst = std::max(worst, std::abs(n - 1));
  return {worst,
          {{"dt", s.dt},
           {"steps", s.steps},
           {"final_norm", run.trace.norms.back()},
           {"band_limit_warnings", run.trace.band_limit_warnings}}};
}

CheckOutcome check_energy(const Scenario& s) {
  const auto run = run_evolution(s, s.dt, s.steps);
  const double e0 = expectations(run.trace.snapshots.front(), run.lagrangian).energy;
  double worst = 0;
  for (const auto& psi : run.trace.snapshots)
    worst = std::max(worst, std::abs(expectations(psi, run.lagrangian).energy - e0));
  return {worst / std::abs(e0), {{"initial_energy", e0}, {"max_abs_drift", worst}}};
}

double mean_residual(const Scenario& s, double dt, int steps) {
  auto run = run_evolution(s, dt, steps);
  const auto res = schrodinger_residual(run.trace, run.lagrangian);
  double sum = 0;
  int n = 0;
  for (double r : res)
    if (std::isfinite(r)) {
      sum += r;
      ++n;
    }
  return sum / n;
}

CheckOutcome check_schrodinger(const Scenario& s) {
  const double dt = opt(s, "schrodinger", "dt", 0.01);
  const int steps = static_cast<int>(opt(s, "schrodinger", "steps", 20));
  const double expected = opt(s, "schrodinger", "expected_ratio", 2.0);
  const double r1 = mean_residual(s, dt, steps);
  const double r2 = mean_residual(s, dt / 2, 2 * steps);
  const double ratio = r1 / r2;
  return {std::abs(ratio - expected),
          {{"dt", dt},
           {"residual_dt", r1},
           {"residual_half_dt", r2},
           {"ratio", ratio},
           {"expected_ratio", expected}}};
}

CheckOutcome check_commutator(const Scenario& s) {
  const auto grid = s.grid();
  const double mid = 0.5 * (grid.min() + grid.max());
  const double width = grid.extent() / 40;
  const WaveFunction gauss(grid, free_packet({s.m, s.hbar, width, mid, 0.0}, grid, 0.0), s.hbar);
  const auto r1 = commutator_check(gauss);
  // Windowed plane wave well inside the band.
  const double k0 = 0.2 * kPi / grid.spacing();
  std::vector<cplx> pw(grid.count());
  for (std::size_t i = 0; i < pw.size(); ++i) {
    const double z = (grid[i] - mid) / (2 * width);
    pw[i] = std::polar(std::exp(-0.5 * z * z), k0 * grid[i]);
  }
  const auto r2 = commutator_check(WaveFunction(grid, std::move(pw), s.hbar));
  return {std::max(r1.residual, r2.residual),
          {{"gaussian", r1.residual}, {"windowed_plane_wave", r2.residual}}};
}

CheckOutcome check_gaussian_integrals(const Scenario& s) {
  const double dt = opt(s, "gaussian-integrals", "dt", 0.1);
  const auto r = gaussian_integral_check(s.m, s.hbar, dt);
  const cplx naive = gaussian_integral_real_axis(s.m, s.hbar, dt, 20.0, 20001);
  return {std::max(r.residual_zeroth, r.residual_second),
          {{"zeroth", {r.zeroth.real(), r.zeroth.imag()}},
           {"second", {r.second.real(), r.second.imag()}},
           {"truncation_ok", r.truncation_ok},
           {"real_axis_zeroth_error", std::abs(naive - 1.0)}}};
}

CheckOutcome check_normalization(const Scenario& s) {
  double worst = 0;
  for (int i = 0; i <= 40; ++i) {
    const double dt = std::pow(10.0, -4.0 + 4.0 * i / 40.0);
    worst = std::max(worst, normalization_recursion_check(s.m, s.hbar, dt));
  }
  return {worst, {{"dt_range", {1e-4, 1.0}}, {"samples", 41}}};
}

LagrangianSpec curved_lagrangian(const Scenario& s) {
  if (s.system == "free") return LagrangianSpec::harmonic(s.m, s.omega);
  return s.lagrangian();
}

CheckOutcome check_euler_lagrange(const Scenario& s) {
  const auto L = curved_lagrangian(s);
  const double T = opt(s, "euler-lagrange", "T", 1.0);
  const int n = static_cast<int>(opt(s, "euler-lagrange", "segments", 64));
  const auto p1 = discrete_stationary_path(0.0, 1.0, n, T / n, L);
  const auto p2 = discrete_stationary_path(0.0, 1.0, 2 * n, T / (2 * n), L);
  const double r1 = euler_lagrange_residual(p1), r2 = euler_lagrange_residual(p2);
  const double order = std::log2(r1 / r2);
  return {std::abs(order - 2.0),
          {{"residual_N", r1}, {"residual_2N", r2}, {"order", order}, {"segments", n}}};
}

CheckOutcome check_straight_path(const Scenario& s) {
  const auto L = LagrangianSpec::free(s.m);
  const int n = 64;
  const auto p = discrete_stationary_path(0.0, 1.0, n, 1.0 / n, L);
  double dev = 0;
  for (std::size_t k = 0; k < p.positions.size(); ++k)
    dev = std::max(dev, std::abs(p.positions[k] - static_cast<double>(k) / n));
  return {dev, {{"el_residual", euler_lagrange_residual(p)}}};
}

CheckOutcome check_classical_action(const Scenario& s) {
  const auto p = discrete_stationary_path(0.0, 1.0, 64, 1.0 / 64, LagrangianSpec::free(s.m));
  const double S = classical_action_along(p);
  const double expect = 0.5 * s.m;
  const auto h = discrete_stationary_path(0.0, 1.0, 64, 1.0 / 64,
                                          LagrangianSpec::harmonic(s.m, s.omega));
  return {std::abs(S - expect) / expect,
          {{"free_action", S},
           {"harmonic_action", classical_action_along(h)},
           {"harmonic_closed_form", harmonic_classical_action(s.m, s.omega, 0.0, 1.0, 1.0)}}};
}

CheckOutcome check_stationary_midpoint(const Scenario& s) {
  const auto fn = segment_mean_action(LagrangianSpec::free(s.m));
  const auto sp = stationary_midpoint(0.0, 4.0, 1.0, 3.0, fn);
  const double mismatch = std::abs(s.m * (sp.b - 0.0) / 1.0 - s.m * (4.0 - sp.b) / 3.0);
  return {std::abs(sp.b - 1.0),
          {{"b_star", sp.b}, {"multiplicity", sp.multiplicity}, {"momentum_mismatch", mismatch}}};
}

CheckOutcome check_concentration(const Scenario& s) {
  const double v = 1.0;
  const auto L = LagrangianSpec::free(s.m);
  const ScaledDensityBuilder b = [&](double scale) {
    return gaussian_short_time(0.0, v * scale, scale, L, s.sigma2_rate(), s.hbar);
  };
  const auto series = concentration_series(b, {1, 10, 100, 1000});
  const double slope = log_log_slope(series.scales, series.ratios);
  const double r = series.strictly_decreasing ? std::abs(slope + 0.5)
                                              : std::numeric_limits<double>::infinity();
  return {r, {{"ratios", series.ratios}, {"slope", slope}, {"strictly_decreasing",
                                                            series.strictly_decreasing}}};
}

CheckOutcome check_path_equivalence(const Scenario& s) {
  LatticePathEnsemble e{3, 0.0, 0.5, {-1.0, -0.5, 0.0, 0.5, 1.0}, LagrangianSpec::free(s.m),
                        0.5, std::nullopt};
  const auto paths = enumerate_paths(e);
  const double exact = equivalence_check(paths, s.hbar);
  const auto grid = lattice_action_grid(paths, kPi / 4 * s.hbar);
  const auto hist = histogram_g(paths, grid);
  const cplx via_density = kernel_value(hist.to_density(), s.eta());
  const cplx direct = path_sum_propagator(paths, s.hbar);
  const double cross = std::abs(via_density - direct);
  return {std::max(exact, cross),
          {{"paths", paths.size()},
           {"exact_binning_residual", exact},
           {"cross_pipeline_residual", cross},
           {"path_sum", {direct.real(), direct.imag()}}}};
}

CheckOutcome check_double_slit(const Scenario& s) {
  const double eta = s.eta();
  const std::vector<SlitGeometry> geoms{
      {1.0, 1.0, 100.0}, {2.0, 0.5, 80.0}, {0.3, 2.0, 500.0}, {5.0, 0.1, 20.0}, {1.7, 0.7, 90.0}};
  std::vector<FringeMeasurement> ms;
  for (const auto& g : geoms) ms.push_back({g.p, g.d, g.D, fringe_spacing(g, eta)});
  const auto est = infer_eta(ms, 1e-12);
  const double dy = fringe_spacing({1.0, 1.0, 10.0}, 1.0);
  const double dy_err = std::abs(dy - 20 * kPi) / (20 * kPi);
  const double eta_err = std::abs(est.eta - eta) / eta;
  return {std::max({est.spread, dy_err, eta_err}),
          {{"estimate", est}, {"fringe_spacing_unit_case", dy}}};
}

CheckOutcome check_action_number(const Scenario&) {
  const double mass = 1e-3, v = 1.0, t = 1.0;
  const double action = mass * v * v * t;
  const double n = action_number(action, kHbarSI);
  return {std::abs(std::log10(n) - 31.0), {{"action_J_s", action}, {"action_number", n}}};
}

CheckOutcome check_indistinguishability(const Scenario& s) {
  std::vector<double> dts, fixed, diff;
  for (int i = 0; i <= 8; ++i) {
    const double dt = std::pow(10.0, -6.0 + 0.5 * i);
    dts.push_back(dt);
    fixed.push_back(indistinguishability_ratio_fixed(1.0, 0.0, dt, s.eta()));
    diff.push_back(indistinguishability_ratio_diffusive(1.0, 0.0, dt, s.sigma2_rate()));
  }
  const double s1 = log_log_slope(dts, fixed), s2 = log_log_slope(dts, diff);
  return {std::max(std::abs(s1 - 1.0), std::abs(s2 - 0.5)),
          {{"fixed_slope", s1}, {"diffusive_slope", s2}, {"decades", 4}}};
}

CheckOutcome check_cramer_rao(const Scenario& s) {
  // Gaussian g tilted by eta stays Gaussian with the same variance, so the
  // moment estimator of eta is efficient with Var = 1 / (sigma2_rate dt).
  const double dt = opt(s, "cramer-rao", "dt", 0.01);
  const auto L = LagrangianSpec::free(s.m);
  const auto g = gaussian_short_time(0.0, 1.0, dt, L, s.sigma2_rate(), s.hbar);
  const std::vector<double> row(g.samples().begin(), g.samples().end());
  const EndpointDensityField field(0.0, dt, EndpointSet::single(1.0), g.grid(), row, g.params());
  const double eta = s.eta();
  const auto tilt = maxent_tilt(field, eta);
  const double info = tilt.model.var_A;
  const double delta_eta = 1.0 / std::sqrt(s.sigma2_rate() * dt);
  const auto cr = cramer_rao_check(info, delta_eta);
  return {std::max(0.0, 1.0 - cr.product),
          {{"I", info},
           {"delta_A", cr.delta_A},
           {"delta_A_min", tilt.model.resolution},
           {"delta_eta", delta_eta},
           {"product", cr.product},
           {"delta_eta_over_eta", delta_eta / eta},
           {"naturalness", tilt.model.naturalness}}};
}

CheckOutcome check_emergent(const Scenario& s) {
  const auto L = s.lagrangian();
  double worst = 0;
  json rows = json::array();
  for (auto [x, v] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}, std::pair{0.5, -2.0}}) {
    const auto r = emergent_lagrangian(gaussian_builder(L, s.sigma2_rate(), s.hbar), x, v);
    const double expect = L.value(x, v);
    const double err = std::abs(r.value - expect) / std::max(1.0, std::abs(expect));
    worst = std::max(worst, err);
    rows.push_back({{"x", x}, {"v", v}, {"value", r.value}, {"refinements", r.refinements}});
  }
  return {worst, {{"points", rows}}};
}

CheckOutcome check_completeness(const Scenario& s) {
  const double dt = opt(s, "completeness", "dt", 0.1);
  const auto k = band_limited_short_time(s.lagrangian(), dt, s.hbar, s.grid(), kBandFraction);
  const auto r = completeness_check(k);
  return {r.probe_residual, {{"dt", dt}, {"pointwise_residual", r.pointwise_residual}}};
}

std::vector<CheckInfo> build_catalogue() {
  return {
      {"semigroup", "decomposed through any intermediate configuration",
       "two half-step free kernels compose to the full-step kernel (operator sense)", 1e-3,
       check_semigroup},
      {"variance-additivity", "Variance additivity for convolution semigroups",
       "variance of composed densities is the sum of the parts", 1e-6,
       check_variance_additivity},
      {"levy-linearity", "log-characteristic function linear in duration",
       "Levy exponent from T and 2T marginals agrees for |k| <= 5/sigma", 1e-6, check_levy},
      {"gaussian-kernel", "Gaussian action density integrates to a closed-form kernel",
       "kernel_from_density on Gaussian g matches C exp(i S/hbar - var/(2 hbar^2))", 1e-8,
       check_gaussian_kernel},
      {"unitarity", "norm conserved under repeated kernel application",
       "max |norm - 1| along the evolution trace", 1e-6, check_unitarity},
      {"energy-conservation", "expected energy conserved along the trace",
       "max relative drift of <H> along the evolution trace", 1e-4, check_energy},
      {"schrodinger", "continuum limit of the one-step composition",
       "centred residual ratio under dt halving minus the expected ratio", 0.2,
       check_schrodinger},
      {"commutator", "canonical commutator on the grid",
       "max |[x,p] psi - i hbar psi| / max |psi| on band-limited packets", 1e-6,
       check_commutator},
      {"gaussian-integrals", "oscillatory Gaussian moments on a rotated contour",
       "zeroth moment 1 and second moment i hbar dt / m", 1e-8, check_gaussian_integrals},
      {"normalization-recursion", "short-time prefactor fixed by composition",
       "|N(2dt) - N(dt)^2 sqrt(pi i hbar dt/m)| / |N(2dt)| over dt in [1e-4, 1]", 1e-12,
       check_normalization},
      {"completeness", "completeness as operator unitarity on band-limited states",
       "||U^dagger U psi - psi|| / ||psi|| over probe packets", 1e-6, check_completeness},
      {"euler-lagrange", "stationarity of composed action gives the equations of motion",
       "measured order of the EL residual under dt halving minus 2", 0.3,
       check_euler_lagrange},
      {"straight-path", "free stationary path is the straight line",
       "max deviation of the free discrete stationary path from the chord", 1e-12,
       check_straight_path},
      {"classical-action", "mean action along the stationary trajectory",
       "relative error of the free action m/2 for b - a = 1, T = 1", 1e-12,
       check_classical_action},
      {"stationary-midpoint", "dominant intermediate configuration",
       "|b* - 1| for a = 0, c = 4, T1 = 1, T2 = 3 (free)", 1e-8, check_stationary_midpoint},
      {"concentration", "relative width shrinks as the action grows",
       "|slope + 1/2| of sqrt(Var)/mean against scale over four decades", 0.01,
       check_concentration},
      {"path-equivalence", "lattice path sum equals the action-density transform",
       "|sum_paths w e^{iS/hbar} - integral g_emp e^{i eta A} dA| on a 25-path lattice", 1e-12,
       check_path_equivalence},
      {"double-slit", "The fringe spacing is therefore",
       "eta recovered from synthetic fringe data, and dy = 20 pi for the unit case", 1e-12,
       check_double_slit},
      {"action-number", "action in units of hbar",
       "|log10 N - 31| for 1 g at 1 m/s over 1 s", 1.0, check_action_number},
      {"indistinguishability", "alternatives become indistinguishable as dt shrinks",
       "deviation of log-log slopes from 1 (fixed) and 1/2 (diffusive)", 0.01,
       check_indistinguishability},
      {"cramer-rao", "resolution bound on action",
       "max(0, 1 - Delta A Delta eta) at the saturating configuration", 1e-9,
       check_cramer_rao},
      {"emergent-lagrangian", "rate of mean action gives the Lagrangian",
       "relative error of the Richardson limit of mean_action/dt", 1e-6, check_emergent},
  };
}

}  // namespace

const std::vector<CheckInfo>& check_catalogue() {
  static const std::vector<CheckInfo> cat = build_catalogue();
  return cat;
}

const CheckInfo* find_check(std::string_view id) {
  for (const auto& c : check_catalogue())
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<std::string> check_ids() {
  std::vector<std::string> out;
  for (const auto& c : check_catalogue()) out.push_back(c.id);
  return out;
}

CheckResult run_check(const CheckInfo& info, const Scenario& scenario) {
  CheckResult r{info.id, info.anchor, 0.0, info.default_tolerance, false, json::object(), ""};
  if (auto it = scenario.tolerances.find(info.id); it != scenario.tolerances.end())
    r.tolerance = it->second;
  try {
    auto out = info.run(scenario);
    r.residual = out.residual;
    r.details = std::move(out.details);
  } catch (const std::exception& e) {
    r.residual = std::numeric_limits<double>::infinity();
    r.error = e.what();
  }
  r.pass = r.residual <= r.tolerance;
  return r;
}

}  // namespace actlab
