#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "actlab/calibration.hpp"
#include "actlab/checks.hpp"
#include "actlab/errors.hpp"
#include "actlab/io.hpp"
#include "actlab/scenario.hpp"

namespace {

using namespace actlab;
using nlohmann::json;

constexpr int kPass = 0, kFail = 1, kConfig = 2;

struct ScenarioFlags {
  std::optional<std::string> config;
  std::optional<std::string> system;
  std::optional<double> m, hbar, omega, grid_min, grid_max, dt, tol;
  std::optional<std::size_t> grid_count;
  std::optional<int> steps;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Start from this config file");
    app->add_option("--system", system, "free | harmonic")
        ->check(CLI::IsMember({"free", "harmonic"}));
    app->add_option("--m", m, "Mass");
    app->add_option("--hbar", hbar, "Action unit (eta = 1/hbar)");
    app->add_option("--omega", omega, "Oscillator frequency");
    app->add_option("--grid-min", grid_min);
    app->add_option("--grid-max", grid_max);
    app->add_option("--grid-count", grid_count);
    app->add_option("--dt", dt);
    app->add_option("--steps", steps);
    app->add_option("--tol", tol, "Override the tolerance");
  }

  Scenario build() const {
    Scenario s = config ? load_scenario(*config) : Scenario{};
    if (system) s.system = *system;
    if (m) s.m = *m;
    if (hbar) s.hbar = *hbar;
    if (omega) s.omega = *omega;
    if (grid_min) s.grid_min = *grid_min;
    if (grid_max) s.grid_max = *grid_max;
    if (grid_count) s.grid_count = *grid_count;
    if (dt) s.dt = *dt;
    if (steps) s.steps = *steps;
    if (!(s.m > 0) || !(s.hbar > 0) || !(s.dt > 0) || s.steps < 1 || !(s.grid_max > s.grid_min))
      throw ConfigError("m, hbar, dt, steps must be positive and grid-max > grid-min");
    return s;
  }
};

int print_results(const std::vector<CheckResult>& results, bool as_json) {
  bool ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    if (as_json) {
      arr.push_back(r);
    } else {
      std::printf("%-4s %-24s residual=%.3e tol=%.1e%s%s\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.residual, r.tolerance, r.error.empty() ? "" : "  error: ",
                  r.error.c_str());
    }
  }
  if (as_json) std::cout << arr.dump(2) << "\n";
  return ok ? kPass : kFail;
}

std::vector<CheckResult> run_ids(const std::vector<std::string>& ids, Scenario s,
                                 std::optional<double> tol) {
  std::vector<CheckResult> out;
  for (const auto& id : ids) {
    if (tol) s.tolerances[id] = *tol;
    out.push_back(run_check(*find_check(id), s));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"actlab: action-density propagator verification"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  auto* run = app.add_subcommand("run", "Run every check of a scenario config");
  std::string run_cfg;
  std::optional<std::string> run_out;
  bool no_artifacts = false;
  run->add_option("config", run_cfg, "Scenario config (INI)")->required();
  run->add_option("-o,--output", run_out, "Output directory (overrides the config)");
  run->add_flag("--no-artifacts", no_artifacts, "Only print results");

  auto* verify = app.add_subcommand("verify", "Run one check");
  std::string verify_id;
  ScenarioFlags verify_flags;
  verify->add_option("check", verify_id, "Check id (see list-checks)")->required();
  verify_flags.attach(verify);

  auto* calibrate = app.add_subcommand("calibrate", "Infer eta from fringe measurements");
  std::string csv;
  double cal_tol = 1e-6;
  calibrate->add_option("csv", csv, "CSV with columns p,d,D,dy")->required();
  calibrate->add_option("--tol", cal_tol, "Universality tolerance on the relative spread");

  auto* classical = app.add_subcommand("classical", "Classical-limit checks");
  auto* cverify = classical->add_subcommand("verify", "Run the classical-limit checks");
  classical->require_subcommand(1);
  ScenarioFlags classical_flags;
  classical_flags.attach(cverify);

  auto* list = app.add_subcommand("list-checks", "List check ids with anchors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*list) {
      json arr = json::array();
      for (const auto& c : check_catalogue()) {
        if (as_json) {
          arr.push_back({{"id", c.id},
                         {"anchor", c.anchor},
                         {"summary", c.summary},
                         {"tolerance", c.default_tolerance}});
        } else {
          std::printf("%-24s tol=%-8.1e %s\n%24s   \"%s\"\n", c.id.c_str(), c.default_tolerance,
                      c.summary.c_str(), "", c.anchor.c_str());
        }
      }
      if (as_json) std::cout << arr.dump(2) << "\n";
      return kPass;
    }
    if (*run) {
      RunOptions opts;
      if (run_out) opts.output_override = *run_out;
      opts.write_artifacts = !no_artifacts;
      const auto report = run_scenario(run_cfg, opts);
      for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      return print_results(report.checks, as_json);
    }
    if (*verify) {
      if (!find_check(verify_id)) {
        std::string ids;
        for (const auto& id : check_ids()) ids += " " + id;
        throw ConfigError("unknown check '" + verify_id + "'; valid:" + ids);
      }
      return print_results(run_ids({verify_id}, verify_flags.build(), verify_flags.tol),
                           as_json);
    }
    if (*calibrate) {
      const auto ms = io::read_measurements_csv(csv);
      const auto est = infer_eta(ms, cal_tol);
      if (as_json) {
        std::cout << json(est).dump(2) << "\n";
      } else {
        std::printf("eta=%.17g hbar=%.17g spread=%.3e measurements=%zu %s\n", est.eta,
                    1 / est.eta, est.spread, ms.size(), est.universal ? "universal" : "NOT universal");
      }
      return est.universal ? kPass : kFail;
    }
    if (*cverify) {
      return print_results(run_ids({"euler-lagrange", "straight-path", "classical-action",
                                    "stationary-midpoint", "concentration", "action-number"},
                                   classical_flags.build(), classical_flags.tol),
                           as_json);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  return kConfig;
}
