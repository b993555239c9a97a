#include "actlab/composition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "actlab/errors.hpp"
#include "actlab/fft.hpp"

namespace actlab {

using cplx = std::complex<double>;

void to_json(nlohmann::json& j, const CompositionReport& r) {
  j = nlohmann::json{{"variance_in_parts", r.variance_in_parts},
                     {"variance_composed", r.variance_composed},
                     {"additivity_residual", r.additivity_residual},
                     {"levy_linearity_residual", r.levy_linearity_residual}};
}

namespace {

void require_same_spacing(const ActionGrid& g1, const ActionGrid& g2) {
  if (std::abs(g1.spacing() - g2.spacing()) > 1e-9 * g1.spacing())
    throw GridMismatchError("action grids must share a spacing to be convolved");
}

ActionGrid sum_grid(const ActionGrid& g1, const ActionGrid& g2) {
  const std::size_t n = g1.count() + g2.count() - 1;
  const double lo = g1.min() + g2.min();
  return ActionGrid(lo, lo + static_cast<double>(n - 1) * g1.spacing(), n);
}

void check_edges(std::span<const double> row, const ActionGrid& grid,
                 const ComposeOptions& opts) {
  const double total = grid.integrate(row);
  if (!(total > 0)) return;
  const std::size_t k = std::min(opts.edge_spacings + 1, row.size() / 2);
  double edge = 0;
  for (std::size_t i = 0; i < k; ++i)
    edge += grid.weight(i) * row[i] + grid.weight(row.size() - 1 - i) * row[row.size() - 1 - i];
  if (edge > opts.edge_mass_tolerance * total)
    throw AliasingError("composed density reaches the edge of the action grid");
}

std::vector<double> direct_convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

EndpointDensityField compose_fields(const EndpointDensityField& first,
                                    const FieldFamily& second, const ComposeOptions& opts) {
  const ActionGrid& g1 = first.grid();
  const std::size_t n1 = g1.count();
  const double h = g1.spacing();

  std::optional<EndpointDensityField> proto;
  std::optional<fft::RealTransform> transform;
  std::vector<std::vector<cplx>> spec_acc;    // per output endpoint, FFT method
  std::vector<std::vector<double>> direct_acc;  // per output endpoint, direct method
  std::vector<double> mean_num, mean_den;
  bool track = first.has_tracked_means();
  std::vector<cplx> f1, f2;

  for (std::size_t ib = 0; ib < first.size(); ++ib) {
    if (first.row_is_zero(ib)) continue;
    const double wb = first.endpoints().weights[ib];
    if (wb == 0.0) continue;
    EndpointDensityField fam = second(first.endpoints().positions[ib]);
    if (!proto) {
      require_same_spacing(g1, fam.grid());
      proto.emplace(fam);
      const std::size_t nc = fam.size();
      const std::size_t len = n1 + fam.grid().count() - 1;
      if (opts.method == ConvolutionMethod::fft) {
        transform.emplace(fft::good_size(len));
        spec_acc.assign(nc, std::vector<cplx>(transform->spectrum_size(), cplx{}));
        f1.resize(transform->spectrum_size());
        f2.resize(transform->spectrum_size());
      } else {
        direct_acc.assign(nc, std::vector<double>(len, 0.0));
      }
      mean_num.assign(nc, 0.0);
      mean_den.assign(nc, 0.0);
    } else {
      if (!fam.grid().same_as(proto->grid()))
        throw GridMismatchError("second-interval fields must share one action grid");
      if (fam.size() != proto->size())
        throw GridMismatchError("second-interval fields must share one endpoint set");
    }
    track = track && fam.has_tracked_means();

    const auto r1 = first.row(ib);
    const double scale = wb * h;
    if (transform) transform->forward(r1, f1);
    const double m1 = first.row_mass(ib);
    const auto mu1 = first.tracked_mean(ib);
    for (std::size_t ic = 0; ic < fam.size(); ++ic) {
      if (fam.row_is_zero(ic)) continue;
      const auto r2 = fam.row(ic);
      if (transform) {
        transform->forward(r2, f2);
        auto& acc = spec_acc[ic];
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += scale * (f1[k] * f2[k]);
      } else {
        const auto conv = direct_convolve(r1, r2);
        auto& acc = direct_acc[ic];
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += scale * conv[k];
      }
      if (track) {
        const auto mu2 = fam.tracked_mean(ic);
        if (mu1 && mu2) {
          const double w = wb * m1 * fam.row_mass(ic);
          mean_num[ic] += w * (*mu1 + *mu2);
          mean_den[ic] += w;
        }
      }
    }
  }
  if (!proto) throw ZeroMassError("first field has no mass to compose");

  const ActionGrid out_grid = sum_grid(g1, proto->grid());
  const std::size_t n = out_grid.count();
  const std::size_t nc = proto->size();
  std::vector<double> samples(nc * n, 0.0);
  std::vector<double> row(transform ? transform->size() : n);
  for (std::size_t ic = 0; ic < nc; ++ic) {
    auto dst = std::span<double>(samples).subspan(ic * n, n);
    if (transform) {
      transform->inverse(spec_acc[ic], row);
      // Negative values here are FFT roundoff around exact zeros.
      for (std::size_t k = 0; k < n; ++k) dst[k] = std::max(row[k], 0.0);
    } else {
      std::copy(direct_acc[ic].begin(), direct_acc[ic].end(), dst.begin());
    }
    check_edges(dst, out_grid, opts);
  }
  std::vector<double> means;
  if (track) {
    means.assign(nc, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t ic = 0; ic < nc; ++ic)
      if (mean_den[ic] > 0) means[ic] = mean_num[ic] / mean_den[ic];
  }
  return EndpointDensityField(first.initial(), first.duration() + proto->duration(),
                              proto->endpoints(), out_grid, std::move(samples),
                              first.params(), std::move(means));
}

FieldBuilder gaussian_field_builder(LagrangianSpec lagrangian, double sigma2_rate,
                                    double hbar, EndpointSet endpoints, FieldOptions opts) {
  struct State {
    std::mutex mutex;
    std::map<double, ActionGrid> grids;
  };
  auto state = std::make_shared<State>();
  return [=](double from, double duration) {
    FieldOptions o = opts;
    if (!o.action_grid) {
      std::lock_guard lock(state->mutex);
      auto it = state->grids.find(duration);
      if (it == state->grids.end())
        it = state->grids
                 .emplace(duration, short_time_action_grid(duration, endpoints, lagrangian,
                                                           sigma2_rate, opts))
                 .first;
      o.action_grid = it->second;
    }
    return short_time_field(from, duration, endpoints, lagrangian, sigma2_rate, hbar, o);
  };
}

EndpointDensityField iterate_short_time(const FieldBuilder& builder, double a, int steps,
                                        double dt, const ComposeOptions& opts) {
  if (steps < 1) throw InvalidArgument("need at least one step");
  EndpointDensityField field = builder(a, dt);
  const FieldFamily family = [&](double from) { return builder(from, dt); };
  for (int s = 1; s < steps; ++s) field = compose_fields(field, family, opts);
  return field;
}

ActionDensity convolve_densities(const ActionDensity& g1, const ActionDensity& g2,
                                 const ComposeOptions& opts) {
  require_same_spacing(g1.grid(), g2.grid());
  const double h = g1.grid().spacing();
  std::vector<double> out = opts.method == ConvolutionMethod::fft
                                ? fft::convolve(g1.samples(), g2.samples())
                                : direct_convolve(g1.samples(), g2.samples());
  for (auto& v : out) v = std::max(v * h, 0.0);
  const ActionGrid grid = sum_grid(g1.grid(), g2.grid());
  check_edges(out, grid, opts);
  std::optional<double> mean;
  if (g1.tracked_mean() && g2.tracked_mean()) mean = *g1.tracked_mean() + *g2.tracked_mean();
  return ActionDensity(grid, std::move(out), g1.a(), g2.b(), g1.duration() + g2.duration(),
                       g1.params(), mean);
}

CompositionReport check_variance_additivity(const ActionDensity& g1, const ActionDensity& g2,
                                            const ActionDensity& composed) {
  const double v1 = variance_action(g1);
  const double v2 = variance_action(g2);
  if (!(v1 > 0) || !(v2 > 0)) throw InvalidArgument("variance additivity needs nonzero variances");
  CompositionReport r;
  r.variance_in_parts = v1 + v2;
  r.variance_composed = variance_action(composed);
  r.additivity_residual = std::abs(r.variance_composed - r.variance_in_parts) / r.variance_in_parts;
  return r;
}

namespace {

// sum_j w_j g_j e^{i k (A_j - centre)} / mass
std::vector<cplx> centred_transform(const ActionDensity& g, std::span<const double> k,
                                    double centre) {
  const auto& grid = g.grid();
  const auto s = g.samples();
  const double mass = g.mass();
  if (!(mass > 0)) throw ZeroMassError("characteristic function of a zero-mass density");
  std::vector<cplx> out(k.size());
  for (std::size_t q = 0; q < k.size(); ++q) {
    double re = 0, im = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == 0.0) continue;
      const double w = grid.weight(j) * s[j];
      const double ph = k[q] * (grid[j] - centre);
      re += w * std::cos(ph);
      im += w * std::sin(ph);
    }
    out[q] = cplx(re, im) / mass;
  }
  return out;
}

}  // namespace

std::vector<cplx> characteristic_function(const ActionDensity& g, std::span<const double> k) {
  const double centre = mean_action(g);
  auto out = centred_transform(g, k, centre);
  for (std::size_t q = 0; q < k.size(); ++q) out[q] *= std::polar(1.0, k[q] * centre);
  return out;
}

std::vector<cplx> levy_exponent(const ActionDensity& g, double duration,
                                std::span<const double> wavenumbers) {
  if (!(duration > 0)) throw InvalidArgument("duration must be positive");
  // Unwrapping is done on the transform centred at the mean, whose phase
  // varies slowly; the linear drift phase k * mean is added back exactly.
  const double centre = mean_action(g);
  const auto phi = centred_transform(g, wavenumbers, centre);
  const std::size_t n = phi.size();
  std::vector<cplx> out(n);
  if (n == 0) return out;
  for (const auto& v : phi)
    if (std::abs(v) < 1e-12) throw NumericalError("characteristic function too small for log");

  std::size_t origin = 0;
  for (std::size_t q = 1; q < n; ++q)
    if (std::abs(wavenumbers[q]) < std::abs(wavenumbers[origin])) origin = q;
  std::vector<double> phase(n);
  phase[origin] = std::arg(phi[origin]);
  auto step = [&](std::size_t from, std::size_t to) {
    constexpr double two_pi = 2 * std::numbers::pi;
    double p = std::arg(phi[to]);
    p += two_pi * std::round((phase[from] - p) / two_pi);
    phase[to] = p;
  };
  for (std::size_t q = origin + 1; q < n; ++q) step(q - 1, q);
  for (std::size_t q = origin; q-- > 0;) step(q + 1, q);
  for (std::size_t q = 0; q < n; ++q)
    out[q] = cplx(std::log(std::abs(phi[q])), phase[q] + wavenumbers[q] * centre) / duration;
  return out;
}

double levy_linearity_residual(const ActionDensity& g_t1, double t1, const ActionDensity& g_t2,
                               double t2, std::span<const double> wavenumbers) {
  const auto p1 = levy_exponent(g_t1, t1, wavenumbers);
  const auto p2 = levy_exponent(g_t2, t2, wavenumbers);
  double r = 0;
  for (std::size_t q = 0; q < p1.size(); ++q) r = std::max(r, std::abs(p1[q] - p2[q]));
  return r;
}

}  // namespace actlab
