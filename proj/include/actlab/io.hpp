#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "actlab/action_density.hpp"
#include "actlab/calibration.hpp"
#include "actlab/classical.hpp"
#include "actlab/evolution.hpp"
#include "actlab/path_oracle.hpp"
#include "actlab/propagator.hpp"

namespace actlab::io {

namespace fs = std::filesystem;

// Writes text atomically enough for reports: whole file, binary mode.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

// %.17g keeps doubles round-trippable.
std::string format_double(double v);

// Columns A, g.
void write_density_csv(const fs::path& path, const ActionDensity& g);
// {a, b, dt, m, hbar, sigma2_rate, grid}
nlohmann::json density_metadata(const ActionDensity& g);
void write_density_json(const fs::path& path, const ActionDensity& g);

struct DensityCsv {
  std::vector<double> action;
  std::vector<double> g;
};
DensityCsv read_density_csv(const fs::path& path);

void write_grid_json(const fs::path& path, const UniformAxis& grid);

// Version-2 layout, little-endian:
//   u32 version = 2, u32 count, f64 dt, f64 hbar,
//   then count*count (re, im) f64 pairs row-major by final point.
// The sidecar JSON carries the grid, provenance and layout.
inline constexpr std::uint32_t kKernelFormatVersion = 2;
void write_kernel(const fs::path& bin_path, const Kernel& k);
Kernel read_kernel(const fs::path& bin_path);
fs::path kernel_sidecar_path(const fs::path& bin_path);

// Columns t, norm, residual, x, p, H.
void write_trace_csv(const fs::path& path, const EvolutionTrace& trace,
                     const LagrangianSpec& lagrangian);
// Columns x, re, im.
void write_snapshot_csv(const fs::path& path, const WaveFunction& psi);
// Columns t, x.
void write_path_csv(const fs::path& path, const DiscretePath& path_data);
// Columns A, g_emp, bin_mass, bin_mean.
void write_histogram_csv(const fs::path& path, const PathHistogram& hist);

// Header p,d,D,dy (any order); blank lines and '#' comments skipped.
std::vector<FringeMeasurement> read_measurements_csv(const fs::path& path);

}  // namespace actlab::io
