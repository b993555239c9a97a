#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "actlab/action_density.hpp"
#include "actlab/lagrangian.hpp"

namespace actlab {

// Lattice paths a = x_0, x_1, ..., x_N = b with interior nodes drawn from a
// fixed position list. Every path carries the same measure weight.
struct LatticePathEnsemble {
  int steps;                     // N
  double a, b;
  std::vector<double> positions;  // allowed interior positions
  LagrangianSpec lagrangian;
  double dt;
  // Per-path measure; defaults to (dx)^(N-1) with dx the position spacing.
  std::optional<double> weight;

  double path_weight() const;
  std::uint64_t path_count() const;
};

inline constexpr std::uint64_t kMaxPaths = 10'000'000;

// sum_k [m (dx_k)^2 / (2 dt) - V(xbar_k) dt]
double segment_rule_action(const std::vector<double>& path, double dt,
                           const LagrangianSpec& lagrangian);

struct PathEnumeration {
  const LatticePathEnsemble* ensemble;
  std::vector<double> actions;  // one per path, in lexicographic order

  std::size_t size() const { return actions.size(); }
  std::vector<double> path(std::size_t index) const;
};

PathEnumeration enumerate_paths(const LatticePathEnsemble& ensemble);

struct ActionAtom {
  double action;
  double mass;  // total path measure at this action
};

// Distinct actions (merged at 1e-12 relative) with their path measure.
std::vector<ActionAtom> action_atoms(const PathEnumeration& paths);

struct PathHistogram {
  ActionGrid bins;                 // bin j centred on bins[j], width dA
  std::vector<double> density;     // g_emp(A_j) = bin measure / dA
  std::vector<double> bin_mass;
  std::vector<double> bin_mean;    // measure-weighted mean action, NaN when empty
  double a = 0, b = 0, duration = 0, mass = 1;

  double total_mass() const;
  // Samples as a density (trapezoid conventions apply from here on).
  ActionDensity to_density() const;
};

PathHistogram histogram_g(const LatticePathEnsemble& ensemble, const ActionGrid& bins);
PathHistogram histogram_g(const PathEnumeration& paths, const ActionGrid& bins);

// Uniform grid placing every distinct action on a grid point, padded by
// `pad` empty bins on each side. Requires commensurate actions (e.g. free
// lattices with endpoints on the lattice).
ActionGrid lattice_action_grid(const PathEnumeration& paths, double max_spacing,
                               std::size_t pad = 4);

// sum_paths w e^{i S / hbar}
std::complex<double> path_sum_propagator(const LatticePathEnsemble& ensemble, double hbar);
std::complex<double> path_sum_propagator(const PathEnumeration& paths, double hbar);

// |path_sum - sum_j g_emp(A_j) dA e^{i A_j* / hbar}|. Without bins every
// distinct action is its own bin.
double equivalence_check(const PathEnumeration& paths, double hbar,
                         const std::optional<ActionGrid>& bins = std::nullopt);

}  // namespace actlab
