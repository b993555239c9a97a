#include "actlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actlab/errors.hpp"

namespace actlab {

MeanActionFn segment_mean_action(LagrangianSpec lagrangian) {
  return [lagrangian = std::move(lagrangian)](double from, double to, double duration) {
    return classical_action(from, to, duration, lagrangian);
  };
}

StationaryPoint stationary_midpoint(double a, double c, double t1, double t2,
                                    const MeanActionFn& mean_action,
                                    const StationaryOptions& opts) {
  if (!(t1 > 0) || !(t2 > 0)) throw InvalidArgument("durations must be positive");
  const double h = opts.fd_step;
  auto total = [&](double b) { return mean_action(a, b, t1) + mean_action(b, c, t2); };
  auto f = [&](double b) { return (total(b + h) - total(b - h)) / (2 * h); };
  auto fp = [&](double b) { return (total(b + h) - 2 * total(b) + total(b - h)) / (h * h); };

  const double span = std::max(std::abs(c - a), 1.0);
  const double lo = std::min(a, c) - span;
  const double hi = std::max(a, c) + span;
  const double target = 0.5 * (a + c);

  std::vector<double> roots;
  double xl = lo, fl = f(lo);
  for (int i = 1; i <= opts.scan_intervals; ++i) {
    const double xr = lo + (hi - lo) * i / opts.scan_intervals;
    const double fr = f(xr);
    if (fl == 0) roots.push_back(xl);
    if (fl * fr < 0) {
      // Safeguarded Newton: Newton steps that leave the bracket fall back
      // to bisection.
      double l = xl, r = xr, fa = fl, x = 0.5 * (xl + xr);
      for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx == 0 || r - l < opts.tolerance * std::max(1.0, std::abs(x))) break;
        if ((fx < 0) == (fa < 0)) {
          l = x;
          fa = fx;
        } else {
          r = x;
        }
        const double d = fp(x);
        double nx = d != 0 ? x - fx / d : 0.5 * (l + r);
        if (!(nx > l && nx < r)) nx = 0.5 * (l + r);
        if (std::abs(nx - x) < opts.tolerance * std::max(1.0, std::abs(x))) {
          x = nx;
          break;
        }
        x = nx;
      }
      roots.push_back(x);
    }
    xl = xr;
    fl = fr;
  }
  if (fl == 0) roots.push_back(hi);
  if (roots.empty()) throw ConvergenceError("no stationary point in the search bracket");
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double x, double y) { return std::abs(x - y) < 1e-9 * span; }),
              roots.end());
  const double best = *std::min_element(roots.begin(), roots.end(), [&](double x, double y) {
    return std::abs(x - target) < std::abs(y - target);
  });
  return {best, static_cast<int>(roots.size())};
}

namespace {

double path_action(const std::vector<double>& x, double dt, const LagrangianSpec& L) {
  double s = 0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double v = (x[k + 1] - x[k]) / dt;
    s += L.value(0.5 * (x[k] + x[k + 1]), v) * dt;
  }
  return s;
}

std::vector<double> gradient(const std::vector<double>& x, double dt, const LagrangianSpec& L) {
  const double m = L.mass();
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double dl = L.potential_gradient(0.5 * (x[j - 1] + x[j]));
    const double dr = L.potential_gradient(0.5 * (x[j] + x[j + 1]));
    g[j] = m * (2 * x[j] - x[j - 1] - x[j + 1]) / dt - 0.5 * (dl + dr) * dt;
  }
  return g;
}

double max_abs_interior(const std::vector<double>& g) {
  double r = 0;
  for (std::size_t j = 1; j + 1 < g.size(); ++j) r = std::max(r, std::abs(g[j]));
  return r;
}

// Thomas algorithm for a symmetric tridiagonal system; returns false when a
// pivot vanishes.
bool solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0) return false;
    const double f = off[i - 1] / diag[i - 1];
    diag[i] -= f * off[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  if (diag[n - 1] == 0) return false;
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
  return true;
}

}  // namespace

DiscretePath discrete_stationary_path(double a, double b, int segments, double dt,
                                      const LagrangianSpec& lagrangian,
                                      const PathSolveOptions& opts) {
  if (segments < 2) throw InvalidArgument("need at least two segments");
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  const double total = dt * segments;
  if (lagrangian.kind() == PotentialKind::harmonic && lagrangian.omega() > 0) {
    const double q = total * lagrangian.omega() / std::numbers::pi;
    const double nearest = std::round(q);
    if (nearest >= 1 && std::abs(q - nearest) < opts.caustic_margin)
      throw CausticError("duration is at a focal time of the harmonic oscillator");
  }
  const std::size_t n = static_cast<std::size_t>(segments) + 1;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k)
    x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(segments);
  x.back() = b;

  const double m = lagrangian.mass();
  auto g = gradient(x, dt, lagrangian);
  double res = max_abs_interior(g);
  int it = 0;
  for (; it < opts.max_iterations && res >= opts.tolerance; ++it) {
    const std::size_t ni = n - 2;
    std::vector<double> diag(ni), off(ni > 0 ? ni - 1 : 0), step(ni);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double cl = lagrangian.potential_curvature(0.5 * (x[j - 1] + x[j]));
      const double cr = lagrangian.potential_curvature(0.5 * (x[j] + x[j + 1]));
      diag[j - 1] = 2 * m / dt - 0.25 * (cl + cr) * dt;
      if (j + 2 < n) off[j - 1] = -m / dt - 0.25 * cr * dt;
      step[j - 1] = -g[j];
    }
    if (!solve_tridiagonal(diag, off, step))
      throw ConvergenceError("singular Hessian in the stationary-path solve");
    // Damping: halve the Newton step until the gradient norm decreases.
    double lambda = 1.0;
    std::vector<double> trial(x);
    double trial_res = res;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      for (std::size_t j = 1; j + 1 < n; ++j) trial[j] = x[j] + lambda * step[j - 1];
      trial_res = max_abs_interior(gradient(trial, dt, lagrangian));
      if (trial_res < res) break;
    }
    if (!(trial_res < res)) break;
    x = trial;
    g = gradient(x, dt, lagrangian);
    res = max_abs_interior(g);
  }
  if (!(res < opts.tolerance))
    throw ConvergenceError("stationary path did not converge");
  DiscretePath path{std::move(x), dt, lagrangian, it, res};
  return path;
}

std::vector<double> action_gradient(const DiscretePath& path) {
  return gradient(path.positions, path.dt, path.lagrangian);
}

double euler_lagrange_residual(const DiscretePath& path) {
  const auto& x = path.positions;
  if (x.size() < 3) throw InvalidArgument("path needs at least three nodes");
  const double dt = path.dt;
  const double m = path.lagrangian.mass();
  double r = 0;
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double vl = (x[j] - x[j - 1]) / dt;
    const double vr = (x[j + 1] - x[j]) / dt;
    r = std::max(r, std::abs(m * (vr - vl) / dt + path.lagrangian.potential_gradient(x[j])));
  }
  return r;
}

double classical_action_along(const DiscretePath& path) {
  return path_action(path.positions, path.dt, path.lagrangian);
}

double free_classical_action(double m, double a, double b, double duration) {
  if (!(duration > 0)) throw InvalidArgument("duration must be positive");
  return m * (b - a) * (b - a) / (2 * duration);
}

double harmonic_classical_action(double m, double omega, double a, double b, double duration) {
  if (!(duration > 0)) throw InvalidArgument("duration must be positive");
  const double s = std::sin(omega * duration);
  if (std::abs(s) < 1e-12) throw CausticError("focal time: classical action undefined");
  return m * omega / (2 * s) * ((a * a + b * b) * std::cos(omega * duration) - 2 * a * b);
}

double concentration_check(const ScaledDensityBuilder& builder, double scale) {
  if (!(scale >= 1)) throw InvalidArgument("scale must be >= 1");
  const auto mom = action_moments(builder(scale));
  // Quadrature rounding leaves |mean| ~ 1e-17 for symmetric densities.
  if (std::abs(mom.mean) <= 1e-12 * std::sqrt(mom.variance)) throw InvalidArgument("zero mean action");
  return std::sqrt(mom.variance) / std::abs(mom.mean);
}

ConcentrationSeries concentration_series(const ScaledDensityBuilder& builder,
                                         const std::vector<double>& scales) {
  ConcentrationSeries out{scales, {}, true};
  for (double s : scales) out.ratios.push_back(concentration_check(builder, s));
  for (std::size_t i = 1; i < out.ratios.size(); ++i)
    if (!(out.ratios[i] < out.ratios[i - 1])) out.strictly_decreasing = false;
  return out;
}

double action_number(double action, double hbar) {
  if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
  return action / hbar;
}

}  // namespace actlab
