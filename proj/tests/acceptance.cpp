// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "actlab/checks.hpp"
#include "actlab/scenario.hpp"

using namespace actlab;

namespace {

struct Line {
  int id;
  std::string what;
  bool pass;
  std::string measured;
};

std::vector<Line> lines;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs a catalogue check under `s` with the criterion's own bound, which may
// differ from the check's default tolerance.
CheckResult run(const std::string& id, const Scenario& s, double bound, double* secs = nullptr) {
  Scenario t = s;
  t.tolerances[id] = bound;
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run_check(*find_check(id), t);
  if (secs) *secs = seconds_since(t0);
  return r;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string err_suffix(const CheckResult& r) { return r.error.empty() ? "" : " error: " + r.error; }

Scenario free_512() {
  Scenario s;
  s.name = "acceptance-free";
  s.grid_min = -20;
  s.grid_max = 20;
  s.grid_count = 512;
  s.dt = 0.01;
  s.steps = 100;
  return s;
}

Scenario harmonic_cfg() {
  auto s = load_scenario(std::string(ACTLAB_CONFIG_DIR) + "/harmonic.cfg");
  s.options["schrodinger"]["expected_ratio"] = 2.0;
  return s;
}

}  // namespace

int main() {
  const auto free = free_512();
  double secs = 0;

  {
    auto s = free;
    s.options["semigroup"]["dt"] = 1.0;
    const auto r = run("semigroup", s, 1e-3, &secs);
    lines.push_back({1, "free kernel semigroup 0.5+0.5 -> 1, 512 pts / extent 40",
                     r.pass && secs < 10,
                     fmt("rel L2 (operator) %.3e, pointwise %.3e, %.3f s", r.residual,
                         r.details.value("pointwise_relative_frobenius", kNaN), secs) +
                         err_suffix(r)});
  }
  {
    const auto r = run("gaussian-kernel", free, 1e-8, &secs);
    lines.push_back({2, "Gaussian g -> closed-form kernel", r.pass && secs < 1,
                     fmt("max rel error %.3e, %.3f s", r.residual, secs) + err_suffix(r)});
  }
  {
    const auto r = run("variance-additivity", free, 1e-6);
    lines.push_back({3, "variance additivity, Gaussian and non-Gaussian", r.pass,
                     fmt("worst residual %.3e", r.residual) + err_suffix(r)});
  }
  {
    const auto r = run("levy-linearity", free, 1e-6);
    lines.push_back({4, "Levy exponent linear in T over |k| <= 5/sigma", r.pass,
                     fmt("max |psi_T - psi_2T| %.3e", r.residual) + err_suffix(r)});
  }
  {
    const auto r = run("unitarity", free, 1e-6);
    lines.push_back({5, "100-step free evolution keeps the norm", r.pass,
                     fmt("max |norm-1| %.3e", r.residual) + err_suffix(r)});
  }
  {
    auto s = free;
    s.options["schrodinger"]["expected_ratio"] = 2.0;
    const auto rf = run("schrodinger", s, 0.2);
    const auto rh = run("schrodinger", harmonic_cfg(), 0.2);
    lines.push_back({6, "Schrodinger residual halving ratio 2 +- 0.2 (free and harmonic)",
                     rf.pass && rh.pass,
                     fmt("free ratio %.4f, harmonic ratio %.4f",
                         rf.details.value("ratio", kNaN), rh.details.value("ratio", kNaN)) +
                         err_suffix(rf) + err_suffix(rh)});
  }
  {
    const auto r = run("commutator", free, 1e-6);
    lines.push_back({7, "[x,p] psi = i hbar psi on band-limited packets", r.pass,
                     fmt("residual %.3e", r.residual) + err_suffix(r)});
  }
  {
    const auto el = run("euler-lagrange", free, 0.3);
    const auto sp = run("straight-path", free, 1e-12);
    lines.push_back({8, "EL residual order 2 +- 0.3; free path straight to 1e-12",
                     el.pass && sp.pass,
                     fmt("order %.4f, straight-line deviation %.3e", el.details.value("order", kNaN),
                         sp.residual) +
                         err_suffix(el) + err_suffix(sp)});
  }
  {
    const auto r = run("classical-action", free, 1e-12);
    const double S = r.details.value("free_action", kNaN);
    const bool ok = r.error.empty() && std::abs(S - 0.5) <= 1e-12;
    lines.push_back({9, "free classical action = 0.5", ok,
                     fmt("S = %.17g, |S - 0.5| = %.3e", S, std::abs(S - 0.5)) + err_suffix(r)});
  }
  {
    const auto r = run("path-equivalence", free, 1e-12, &secs);
    const bool ok = r.pass && secs < 1 && r.details.value("paths", 0) == 25;
    lines.push_back({10, "25-path lattice sum = action-density transform", ok,
                     fmt("residual %.3e, paths %.0f, %.3f s", r.residual,
                         r.details.value("paths", 0), secs) +
                         err_suffix(r)});
  }
  {
    const auto r = run("double-slit", free, 1e-12);
    lines.push_back({11, "eta from 5 geometries; dy(1,1,1,10) = 20 pi", r.pass,
                     fmt("worst residual %.3e, dy = %.15g", r.residual,
                         r.details.value("fringe_spacing_unit_case", kNaN)) +
                         err_suffix(r)});
  }
  {
    const auto r = run("action-number", free, 1.0);
    lines.push_back({12, "action number for 1 g, 1 m/s, 1 s within a decade of 1e31", r.pass,
                     fmt("N = %.4e", r.details.value("action_number", kNaN)) + err_suffix(r)});
  }
  {
    const auto r = run("indistinguishability", free, 0.01);
    lines.push_back({13, "indistinguishability slopes 1 and 1/2 over 4 decades", r.pass,
                     fmt("fixed %.5f, diffusive %.5f", r.details.value("fixed_slope", kNaN),
                         r.details.value("diffusive_slope", kNaN)) +
                         err_suffix(r)});
  }
  {
    const auto r = run("cramer-rao", free, 1e-9);
    lines.push_back({14, "Delta A * Delta eta >= 1 - 1e-9 at saturation", r.pass,
                     fmt("product %.15f", r.details.value("product", kNaN)) + err_suffix(r)});
  }
  {
    const auto r = run("normalization-recursion", free, 1e-12);
    lines.push_back({15, "normalization recursion over dt in [1e-4, 1]", r.pass,
                     fmt("max rel residual %.3e", r.residual) + err_suffix(r)});
  }

  int failed = 0;
  for (const auto& l : lines) {
    std::printf("%s criterion %2d: %s | %s\n", l.pass ? "PASS" : "FAIL", l.id, l.what.c_str(),
                l.measured.c_str());
    failed += !l.pass;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
