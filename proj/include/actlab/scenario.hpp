#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "actlab/grids.hpp"
#include "actlab/lagrangian.hpp"

namespace actlab {

inline constexpr double kHbarSI = 1.054571817e-34;  // J s

// Parsed and validated configuration. Every field has a default so that a
// scenario can also be assembled from command-line flags.
struct Scenario {
  std::string name = "scenario";
  std::string system = "free";  // free | harmonic | custom
  std::vector<std::string> checks;
  std::string output = "out";
  std::string units = "natural";  // natural | si

  double m = 1.0;
  double hbar = 1.0;
  double omega = 1.0;
  double sigma2_factor = 1.0;  // sigma2_rate = sigma2_factor * hbar^2 per unit time
  double v_max = 0.0;          // 0 selects the default locality cutoff
  std::vector<double> potential;  // custom: V(x) = sum_k c_k x^k

  double grid_min = -20.0;
  double grid_max = 20.0;
  std::size_t grid_count = 256;
  double dt = 0.01;
  int steps = 100;

  std::map<std::string, double> tolerances;  // overrides by check id
  // Per-check parameters, keyed by check id then parameter name.
  std::map<std::string, std::map<std::string, double>> options;
  std::vector<std::string> warnings;

  double eta() const { return 1.0 / hbar; }
  double sigma2_rate() const { return sigma2_factor * hbar * hbar; }
  SpatialGrid grid() const { return SpatialGrid(grid_min, grid_max, grid_count); }
  LagrangianSpec lagrangian() const;
  double option(const std::string& check, const std::string& key, double fallback) const;
};

// Parses INI text; throws ConfigError with a readable message.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

// Effective configuration, echoed into reports.
nlohmann::json to_json(const Scenario& s);

struct CheckResult {
  std::string name;
  std::string anchor;
  double residual;
  double tolerance;
  bool pass;
  nlohmann::json details;
  std::string error;  // empty unless the check threw
};

void to_json(nlohmann::json& j, const CheckResult& r);

struct VerificationReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> artifacts;
  nlohmann::json config;
  nlohmann::json environment;

  bool all_pass() const;
  // Deterministic apart from the generated_at field.
  nlohmann::json to_json() const;
};

nlohmann::json environment_fingerprint();

struct RunOptions {
  std::optional<std::filesystem::path> output_override;
  bool write_artifacts = true;
};

// Runs every requested check, writes report.json and data artifacts into
// the scenario output directory (relative paths resolve against the config
// file's directory).
VerificationReport run_scenario(const std::filesystem::path& config_path,
                                const RunOptions& opts = {});
VerificationReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                                const RunOptions& opts = {});

// Plot-ready data artifacts for the scenario; returns the files written.
std::vector<std::string> write_artifacts(const Scenario& scenario,
                                         const std::filesystem::path& out_dir);

}  // namespace actlab
