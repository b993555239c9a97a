#include "actlab/scenario.hpp"

#include <fftw3.h>
#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "actlab/checks.hpp"
#include "actlab/errors.hpp"
#include "actlab/io.hpp"
#include "actlab/reference.hpp"
#include "actlab/simd/kernels.hpp"

namespace actlab {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario", {"name", "system", "checks", "output", "units"}},
      {"physics", {"m", "hbar", "eta", "omega", "sigma2_factor", "v_max", "potential"}},
      {"grid", {"min", "max", "count"}},
      {"time", {"dt", "steps"}},
  };
  return keys;
}

std::string join(const std::vector<std::string>& v) { return boost::algorithm::join(v, ", "); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, s, boost::is_any_of(", \t"), boost::token_compress_on);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

double to_number(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string t = boost::algorithm::trim_copy(raw);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    if (!std::isfinite(v)) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected a finite number, got '" + t + "'");
  }
}

std::string unquote(std::string s) {
  boost::algorithm::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// Trailing ';' or '#' comments after a value; the ptree parser keeps them.
std::string strip_comment(std::string s) {
  for (const char c : {'#', ';'})
    if (auto pos = s.find(c); pos != std::string::npos) s.erase(pos);
  return boost::algorithm::trim_copy(s);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

LagrangianSpec Scenario::lagrangian() const {
  if (system == "free") return LagrangianSpec::free(m);
  if (system == "harmonic") return LagrangianSpec::harmonic(m, omega);
  auto coeffs = potential;
  return LagrangianSpec::custom(
      m,
      [coeffs](double x) {
        double v = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
      },
      "polynomial");
}

double Scenario::option(const std::string& check, const std::string& key, double fallback) const {
  if (auto c = options.find(check); c != options.end())
    if (auto k = c->second.find(key); k != c->second.end()) return k->second;
  return fallback;
}

Scenario parse_scenario(const std::string& text) {
  pt::ptree tree;
  try {
    // Accept '#' comment lines alongside the ';' lines the parser knows.
    std::istringstream raw(text);
    std::ostringstream cleaned;
    for (std::string line; std::getline(raw, line);) {
      const auto t = boost::algorithm::trim_left_copy(line);
      cleaned << (t.starts_with('#') ? std::string() : line) << '\n';
    }
    std::istringstream in(cleaned.str());
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }

  Scenario s;
  const auto ids = check_ids();
  const std::set<std::string> id_set(ids.begin(), ids.end());
  bool hbar_given = false, eta_given = false;
  double eta = 0;

  for (const auto& [section, body] : tree) {
    if (!body.data().empty() && body.empty())
      throw ConfigError("key '" + section + "' outside any section");
    auto value = [&](const std::string& key) { return strip_comment(body.get<std::string>(key)); };
    auto number = [&](const std::string& key) { return to_number(section, key, value(key)); };

    if (auto it = known_keys().find(section); it != known_keys().end()) {
      for (const auto& [key, _] : body)
        if (!it->second.contains(key))
          throw ConfigError("[" + section + "] unknown key '" + key + "'; valid keys: " +
                            join({it->second.begin(), it->second.end()}));
    } else if (section != "tolerances" && !id_set.contains(section)) {
      throw ConfigError("unknown section [" + section +
                        "]; valid: scenario, physics, grid, time, tolerances, or a check id (" +
                        join(ids) + ")");
    }

    if (section == "scenario") {
      if (body.count("name")) s.name = unquote(value("name"));
      if (body.count("system")) s.system = unquote(value("system"));
      if (body.count("output")) s.output = unquote(value("output"));
      if (body.count("units")) s.units = unquote(value("units"));
      if (body.count("checks")) {
        const auto list = split_list(value("checks"));
        if (list.size() == 1 && list[0] == "all") {
          s.checks = ids;
        } else {
          for (const auto& c : list) {
            require(id_set.contains(c),
                    "unknown check '" + c + "'; valid checks: " + join(ids));
            s.checks.push_back(c);
          }
        }
      }
    } else if (section == "physics") {
      if (body.count("m")) s.m = number("m");
      if (body.count("hbar")) s.hbar = number("hbar"), hbar_given = true;
      if (body.count("eta")) eta = number("eta"), eta_given = true;
      if (body.count("omega")) s.omega = number("omega");
      if (body.count("sigma2_factor")) s.sigma2_factor = number("sigma2_factor");
      if (body.count("v_max")) s.v_max = number("v_max");
      if (body.count("potential"))
        for (const auto& c : split_list(value("potential")))
          s.potential.push_back(to_number(section, "potential", c));
    } else if (section == "grid") {
      if (body.count("min")) s.grid_min = number("min");
      if (body.count("max")) s.grid_max = number("max");
      if (body.count("count")) {
        const double c = number("count");
        require(c == std::floor(c) && c >= SpatialGrid::kMinCount,
                "[grid] count must be an integer >= " + std::to_string(SpatialGrid::kMinCount));
        s.grid_count = static_cast<std::size_t>(c);
      }
    } else if (section == "time") {
      if (body.count("dt")) s.dt = number("dt");
      if (body.count("steps")) {
        const double n = number("steps");
        require(n == std::floor(n) && n >= 1, "[time] steps must be a positive integer");
        s.steps = static_cast<int>(n);
      }
    } else if (section == "tolerances") {
      for (const auto& [key, _] : body) {
        require(id_set.contains(key),
                "[tolerances] unknown check '" + key + "'; valid checks: " + join(ids));
        const double t = number(key);
        require(t > 0, "[tolerances] " + key + " must be positive");
        s.tolerances[key] = t;
      }
    } else {
      for (const auto& [key, _] : body) s.options[section][key] = number(key);
    }
  }

  require(s.system == "free" || s.system == "harmonic" || s.system == "custom",
          "[scenario] system must be free, harmonic or custom, got '" + s.system + "'");
  require(s.units == "natural" || s.units == "si",
          "[scenario] units must be natural or si, got '" + s.units + "'");
  if (s.units == "si" && !hbar_given && !eta_given) s.hbar = kHbarSI;
  if (eta_given) {
    require(eta > 0, "[physics] eta must be positive");
    if (hbar_given)
      require(std::abs(s.hbar * eta - 1) <= 1e-9,
              "[physics] hbar and eta are both given but hbar * eta != 1");
    s.hbar = 1.0 / eta;
  }
  require(s.m > 0, "[physics] m must be positive");
  require(s.hbar > 0, "[physics] hbar must be positive");
  require(s.sigma2_factor > 0, "[physics] sigma2_factor must be positive");
  require(s.v_max >= 0, "[physics] v_max must be nonnegative");
  require(s.system != "harmonic" || s.omega > 0, "[physics] omega must be positive");
  require(s.system != "custom" || !s.potential.empty(),
          "[physics] custom system needs potential coefficients");
  require(s.grid_max > s.grid_min, "[grid] max must exceed min");
  require(s.dt > 0, "[time] dt must be positive");
  if (s.checks.empty()) s.warnings.push_back("no checks requested");
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.what());
  }
  return parse_scenario(text);
}

json to_json(const Scenario& s) {
  return {{"name", s.name},
          {"system", s.system},
          {"checks", s.checks},
          {"output", s.output},
          {"units", s.units},
          {"m", s.m},
          {"hbar", s.hbar},
          {"eta", s.eta()},
          {"omega", s.omega},
          {"sigma2_factor", s.sigma2_factor},
          {"sigma2_rate", s.sigma2_rate()},
          {"v_max", s.v_max},
          {"potential", s.potential},
          {"grid", {{"min", s.grid_min}, {"max", s.grid_max}, {"count", s.grid_count}}},
          {"time", {{"dt", s.dt}, {"steps", s.steps}}},
          {"tolerances", s.tolerances},
          {"options", s.options}};
}

void to_json(json& j, const CheckResult& r) {
  // JSON has no infinity; a failed-by-exception residual is written as null.
  j = {{"name", r.name},
       {"anchor", r.anchor},
       {"residual", std::isfinite(r.residual) ? json(r.residual) : json(nullptr)},
       {"tolerance", r.tolerance},
       {"pass", r.pass},
       {"details", r.details}};
  if (!r.error.empty()) j["error"] = r.error;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json VerificationReport::to_json() const {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"scenario", scenario},
          {"pass", all_pass()},
          {"checks", checks},
          {"warnings", warnings},
          {"artifacts", artifacts},
          {"config", config},
          {"environment", environment},
          {"generated_at", stamp}};
}

json environment_fingerprint() {
  utsname u{};
  std::string platform = "unknown";
  if (uname(&u) == 0) platform = std::string(u.sysname) + " " + u.release + " " + u.machine;
  std::vector<std::string> tables;
  for (const auto* t : simd::available()) tables.emplace_back(t->name);
  return {{"compiler", std::string(__VERSION__)},
          {"cxx_standard", __cplusplus},
          {"simd", std::string(simd::active().name)},
          {"simd_available", tables},
          {"fftw", std::string(fftw_version)},
          {"platform", platform}};
}

std::vector<std::string> write_artifacts(const Scenario& s, const fs::path& out) {
  std::vector<std::string> files;
  auto emit = [&](const std::string& name) {
    files.push_back(name);
    return out / name;
  };
  const auto L = s.lagrangian();
  const auto grid = s.grid();

  const auto g = gaussian_short_time(0.0, 1.0, s.dt, L, s.sigma2_rate(), s.hbar);
  io::write_density_csv(emit("density.csv"), g);
  io::write_density_json(emit("density.json"), g);
  io::write_grid_json(emit("grid.json"), grid);
  io::write_grid_json(emit("action_grid.json"), g.grid());

  const auto k = band_limited_short_time(L, s.dt, s.hbar, grid, kBandFraction);
  io::write_kernel(emit("kernel.bin"), k);
  files.push_back("kernel.bin.json");

  std::vector<cplx> psi0 =
      s.system == "harmonic"
          ? coherent_state({s.m, s.omega, s.hbar, 1.0, 0.0}, grid, 0.0)
          : free_packet({s.m, s.hbar, grid.extent() / 40, 0.5 * (grid.min() + grid.max()),
                         s.hbar},
                        grid, 0.0);
  WaveFunction w(grid, std::move(psi0), s.hbar);
  w = w.scaled(1.0 / std::sqrt(w.norm()));
  try {
    auto trace = evolve(k, w, s.steps);
    schrodinger_residual(trace, L);
    io::write_trace_csv(emit("trace.csv"), trace, L);
    io::write_snapshot_csv(emit("snapshot_initial.csv"), trace.snapshots.front());
    io::write_snapshot_csv(emit("snapshot_final.csv"), trace.snapshots.back());
  } catch (const NormDriftError& e) {
    io::write_text(emit("trace_error.txt"), std::string(e.what()) + "\n");
  }

  try {
    const auto path = discrete_stationary_path(0.0, 1.0, 64, 1.0 / 64, L);
    io::write_path_csv(emit("path.csv"), path);
  } catch (const NumericalError& e) {
    io::write_text(emit("path_error.txt"), std::string(e.what()) + "\n");
  }

  LatticePathEnsemble lattice{3, 0.0, 0.5, {-1.0, -0.5, 0.0, 0.5, 1.0}, LagrangianSpec::free(s.m),
                              0.5, std::nullopt};
  const auto paths = enumerate_paths(lattice);
  io::write_histogram_csv(emit("histogram.csv"),
                          histogram_g(paths, lattice_action_grid(paths, 0.7 * s.hbar)));
  return files;
}

VerificationReport run_scenario(const Scenario& s, const fs::path& out_dir,
                                const RunOptions& opts) {
  VerificationReport r;
  r.scenario = s.name;
  r.config = to_json(s);
  r.environment = environment_fingerprint();
  r.warnings = s.warnings;
  for (const auto& id : s.checks) r.checks.push_back(run_check(*find_check(id), s));
  if (opts.write_artifacts) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string());
    r.artifacts = write_artifacts(s, out_dir);
    r.artifacts.insert(r.artifacts.begin(), "report.json");
    io::write_text(out_dir / "report.json", r.to_json().dump(2) + "\n");
  }
  return r;
}

VerificationReport run_scenario(const fs::path& config_path, const RunOptions& opts) {
  const auto s = load_scenario(config_path);
  fs::path out = opts.output_override ? *opts.output_override : fs::path(s.output);
  if (out.is_relative() && !opts.output_override) out = config_path.parent_path() / out;
  return run_scenario(s, out, opts);
}

}  // namespace actlab
