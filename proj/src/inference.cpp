#include "actlab/inference.hpp"

#include <cmath>
#include <limits>

#include "actlab/errors.hpp"

namespace actlab {

void to_json(nlohmann::json& j, const MaxEntModel& m) {
  j = nlohmann::json{{"eta", m.eta},
                     {"log_Z", m.log_Z},
                     {"Z", m.Z},
                     {"mean_A", m.mean_A},
                     {"var_A", m.var_A},
                     {"resolution", std::isfinite(m.resolution) ? nlohmann::json(m.resolution)
                                                                : nlohmann::json(nullptr)},
                     {"naturalness", m.naturalness},
                     {"warnings", m.warnings}};
}

void to_json(nlohmann::json& j, const CramerRaoResult& r) {
  j = nlohmann::json{{"delta_A", r.delta_A},
                     {"delta_eta", r.delta_eta},
                     {"product", r.product},
                     {"pass", r.pass}};
}

TiltedField maxent_tilt(const EndpointDensityField& field, double eta) {
  if (!std::isfinite(eta)) throw InvalidArgument("eta must be finite");
  const auto& grid = field.grid();
  const std::size_t n = grid.count();
  const double neg_inf = -std::numeric_limits<double>::infinity();

  // log of w_b g(A_j; b) e^{-eta A_j}; zeros carry -inf.
  std::vector<double> logs(field.size() * n, neg_inf);
  double lmax = neg_inf;
  for (std::size_t ib = 0; ib < field.size(); ++ib) {
    const auto r = field.row(ib);
    for (std::size_t j = 0; j < n; ++j) {
      if (r[j] <= 0) continue;
      const double l = std::log(r[j]) - eta * grid[j];
      logs[ib * n + j] = l;
      lmax = std::max(lmax, l);
    }
  }
  if (!std::isfinite(lmax)) throw ZeroMassError("cannot tilt a zero-mass field");

  std::vector<double> shifted(field.size() * n, 0.0);
  double sum = 0.0;
  for (std::size_t ib = 0; ib < field.size(); ++ib) {
    const double wb = field.endpoints().weights[ib];
    for (std::size_t j = 0; j < n; ++j) {
      const double l = logs[ib * n + j];
      if (l == neg_inf) continue;
      const double v = std::exp(l - lmax);
      shifted[ib * n + j] = v;
      sum += wb * grid.weight(j) * v;
    }
  }
  if (!(sum > 0)) throw NumericalError("partition sum vanished in the log domain");

  MaxEntModel model;
  model.eta = eta;
  model.log_Z = lmax + std::log(sum);
  model.Z = std::exp(model.log_Z);
  if (!std::isfinite(model.log_Z)) throw NumericalError("partition value not representable");
  if (model.Z == 0.0 || !std::isfinite(model.Z))
    model.warnings.push_back("Z itself under/overflows a double; use log_Z");
  if (eta <= 0) model.warnings.push_back("nonpositive eta");

  const double inv = 1.0 / sum;
  for (auto& v : shifted) v *= inv;
  EndpointDensityField prob(field.initial(), field.duration(), field.endpoints(), grid,
                            std::move(shifted), field.params());

  const ActionDensity marginal = marginal_over_endpoints(prob);
  const auto mom = action_moments(marginal);
  model.mean_A = mom.mean;
  model.var_A = mom.variance;
  model.resolution = eta != 0 ? 1.0 / eta : std::numeric_limits<double>::infinity();
  model.naturalness = eta * std::sqrt(mom.variance);
  return {std::move(prob), std::move(model)};
}

ActionDensity tilted_marginal(const TiltedField& tilted) {
  return marginal_over_endpoints(tilted.probability);
}

double fisher_information(const EndpointDensityField& field, double eta) {
  return maxent_tilt(field, eta).model.var_A;
}

double solve_eta(const EndpointDensityField& field, double target_mean,
                 const SolveEtaOptions& opts) {
  auto mean_at = [&](double eta) { return maxent_tilt(field, eta).model.mean_A; };
  // mean_A decreases with eta (its derivative is -Var A).
  double lo = opts.eta_min;
  double hi = std::max(2 * lo, 1.0);
  while (mean_at(hi) > target_mean) {
    if (hi >= opts.eta_max) throw ConvergenceError("target mean below reachable range");
    hi = std::min(2 * hi, opts.eta_max);
  }
  if (mean_at(lo) < target_mean) throw ConvergenceError("target mean above reachable range");
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_at(mid);
    if (std::abs(m - target_mean) <= opts.tolerance * std::max(1.0, std::abs(target_mean)) ||
        hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi)
      return mid;
    (m > target_mean ? lo : hi) = mid;
  }
  throw ConvergenceError("eta bisection did not converge");
}

CramerRaoResult cramer_rao_check(double fisher_info, double delta_eta) {
  if (!(fisher_info > 0) || !(delta_eta > 0))
    throw InvalidArgument("Cramer-Rao check needs positive I and delta_eta");
  CramerRaoResult r;
  r.delta_A = std::sqrt(fisher_info);
  r.delta_eta = delta_eta;
  r.product = r.delta_A * delta_eta;
  r.pass = r.product >= 1 - 1e-9;
  return r;
}

double indistinguishability_ratio_fixed(double l1, double l2, double dt, double eta) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  return std::abs(l1 - l2) * dt * eta;
}

double indistinguishability_ratio_diffusive(double l1, double l2, double dt, double beta) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (!(beta > 0)) throw InvalidArgument("beta must be positive");
  return std::abs(l1 - l2) * std::sqrt(dt / beta);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("need >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace actlab
