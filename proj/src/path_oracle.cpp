#include "actlab/path_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "actlab/errors.hpp"

namespace actlab {

double LatticePathEnsemble::path_weight() const {
  if (weight) return *weight;
  if (positions.size() < 2 || steps < 2) return 1.0;
  const double dx = std::abs(positions[1] - positions[0]);
  return std::pow(dx, steps - 1);
}

std::uint64_t LatticePathEnsemble::path_count() const {
  std::uint64_t c = 1;
  for (int k = 1; k < steps; ++k) {
    if (c > kMaxPaths) return c;
    c *= positions.size();
  }
  return c;
}

double segment_rule_action(const std::vector<double>& path, double dt,
                           const LagrangianSpec& lagrangian) {
  const double m = lagrangian.mass();
  double s = 0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double d = path[k + 1] - path[k];
    s += m * d * d / (2 * dt) - lagrangian.potential(0.5 * (path[k] + path[k + 1])) * dt;
  }
  return s;
}

std::vector<double> PathEnumeration::path(std::size_t index) const {
  const auto& e = *ensemble;
  const std::size_t p = e.positions.size();
  std::vector<double> x(static_cast<std::size_t>(e.steps) + 1);
  x.front() = e.a;
  x.back() = e.b;
  for (int k = e.steps - 1; k >= 1; --k) {
    x[static_cast<std::size_t>(k)] = e.positions[index % p];
    index /= p;
  }
  return x;
}

PathEnumeration enumerate_paths(const LatticePathEnsemble& e) {
  if (e.steps < 1) throw InvalidArgument("need at least one time step");
  if (!(e.dt > 0)) throw InvalidArgument("dt must be positive");
  if (e.steps > 1 && e.positions.empty()) throw InvalidArgument("no interior positions");
  const std::uint64_t count = e.path_count();
  if (count > kMaxPaths) throw InvalidArgument("path count exceeds the enumeration guard");
  PathEnumeration out{&e, {}};
  out.actions.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out.actions[i] = segment_rule_action(out.path(i), e.dt, e.lagrangian);
  for (double s : out.actions)
    if (!std::isfinite(s)) throw NumericalError("non-finite path action");
  return out;
}

std::vector<ActionAtom> action_atoms(const PathEnumeration& paths) {
  std::vector<double> s(paths.actions);
  std::sort(s.begin(), s.end());
  const double w = paths.ensemble->path_weight();
  std::vector<ActionAtom> atoms;
  for (double v : s) {
    if (!atoms.empty() &&
        std::abs(v - atoms.back().action) <= 1e-12 * std::max(1.0, std::abs(v))) {
      atoms.back().mass += w;
    } else {
      atoms.push_back({v, w});
    }
  }
  return atoms;
}

double PathHistogram::total_mass() const {
  double m = 0;
  for (double v : bin_mass) m += v;
  return m;
}

ActionDensity PathHistogram::to_density() const {
  return ActionDensity(bins, density, a, b, duration,
                       {mass, 1.0, 1.0});
}

PathHistogram histogram_g(const PathEnumeration& paths, const ActionGrid& bins) {
  const double h = bins.spacing();
  const double lo = bins.min() - 0.5 * h, hi = bins.max() + 0.5 * h;
  const double w = paths.ensemble->path_weight();
  PathHistogram out{bins, std::vector<double>(bins.count(), 0.0),
                    std::vector<double>(bins.count(), 0.0),
                    std::vector<double>(bins.count(), 0.0)};
  const auto& e = *paths.ensemble;
  out.a = e.a;
  out.b = e.b;
  out.duration = e.dt * e.steps;
  out.mass = e.lagrangian.mass();
  for (double s : paths.actions) {
    if (s < lo || s > hi) throw InvalidArgument("histogram bins do not cover the path actions");
    const std::size_t j = bins.nearest(s);
    out.bin_mass[j] += w;
    out.bin_mean[j] += w * s;
  }
  for (std::size_t j = 0; j < bins.count(); ++j) {
    out.density[j] = out.bin_mass[j] / h;
    out.bin_mean[j] = out.bin_mass[j] > 0 ? out.bin_mean[j] / out.bin_mass[j]
                                          : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

PathHistogram histogram_g(const LatticePathEnsemble& ensemble, const ActionGrid& bins) {
  return histogram_g(enumerate_paths(ensemble), bins);
}

ActionGrid lattice_action_grid(const PathEnumeration& paths, double max_spacing,
                               std::size_t pad) {
  const auto atoms = action_atoms(paths);
  const double lo = atoms.front().action, hi = atoms.back().action;
  // Smallest gap between distinct actions, then the largest spacing dividing
  // every gap that does not exceed max_spacing.
  double quantum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < atoms.size(); ++i)
    quantum = std::min(quantum, atoms[i].action - atoms[i - 1].action);
  if (!std::isfinite(quantum)) quantum = max_spacing;
  for (const auto& at : atoms) {
    const double r = (at.action - lo) / quantum;
    if (std::abs(r - std::round(r)) > 1e-8)
      throw InvalidArgument("path actions are not commensurate with a uniform grid");
  }
  const double divisions = std::max(1.0, std::ceil(quantum / max_spacing - 1e-12));
  const double h = quantum / divisions;
  const auto inner = static_cast<std::size_t>(std::llround((hi - lo) / h));
  std::size_t count = inner + 1 + 2 * pad;
  std::size_t extra = count < ActionGrid::kMinCount ? ActionGrid::kMinCount - count : 0;
  const std::size_t left = pad + extra / 2;
  count += extra;
  const double min = lo - static_cast<double>(left) * h;
  return ActionGrid(min, min + static_cast<double>(count - 1) * h, count);
}

std::complex<double> path_sum_propagator(const PathEnumeration& paths, double hbar) {
  if (!(hbar > 0)) throw InvalidArgument("hbar must be positive");
  const double w = paths.ensemble->path_weight();
  std::complex<double> sum = 0;
  for (double s : paths.actions) sum += w * std::polar(1.0, s / hbar);
  return sum;
}

std::complex<double> path_sum_propagator(const LatticePathEnsemble& ensemble, double hbar) {
  return path_sum_propagator(enumerate_paths(ensemble), hbar);
}

double equivalence_check(const PathEnumeration& paths, double hbar,
                         const std::optional<ActionGrid>& bins) {
  const auto direct = path_sum_propagator(paths, hbar);
  std::complex<double> binned = 0;
  if (!bins) {
    for (const auto& at : action_atoms(paths)) binned += at.mass * std::polar(1.0, at.action / hbar);
  } else {
    const auto hist = histogram_g(paths, *bins);
    for (std::size_t j = 0; j < hist.bins.count(); ++j) {
      if (hist.bin_mass[j] == 0) continue;
      binned += hist.density[j] * hist.bins.spacing() * std::polar(1.0, hist.bin_mean[j] / hbar);
    }
  }
  return std::abs(direct - binned);
}

}  // namespace actlab
