#include "actlab/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "actlab/errors.hpp"

namespace actlab::io {

namespace {

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("truncated kernel file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, mode | std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

double parse_double(const std::string& s) {
  const std::string t = boost::algorithm::trim_copy(s);
  double v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InvalidArgument("not a number: '" + t + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  boost::algorithm::split(out, line, boost::is_any_of(","));
  for (auto& s : out) boost::algorithm::trim(s);
  return out;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_density_csv(const fs::path& path, const ActionDensity& g) {
  std::ostringstream os;
  os << "A,g\n";
  for (std::size_t i = 0; i < g.grid().count(); ++i)
    os << format_double(g.grid()[i]) << ',' << format_double(g.samples()[i]) << '\n';
  write_text(path, os.str());
}

nlohmann::json density_metadata(const ActionDensity& g) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return nlohmann::json{{"a", num(g.a())},
                        {"b", num(g.b())},
                        {"dt", g.duration()},
                        {"m", g.params().m},
                        {"hbar", g.params().hbar},
                        {"sigma2_rate", g.params().sigma2_rate},
                        {"grid", g.grid()}};
}

void write_density_json(const fs::path& path, const ActionDensity& g) {
  write_text(path, density_metadata(g).dump(2) + "\n");
}

DensityCsv read_density_csv(const fs::path& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::getline(is, line);
  if (boost::algorithm::trim_copy(line) != "A,g") throw InvalidArgument("density CSV header must be A,g");
  DensityCsv out;
  while (std::getline(is, line)) {
    if (boost::algorithm::trim_copy(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 2) throw InvalidArgument("density CSV rows need two columns");
    out.action.push_back(parse_double(f[0]));
    out.g.push_back(parse_double(f[1]));
  }
  return out;
}

void write_grid_json(const fs::path& path, const UniformAxis& grid) {
  write_text(path, nlohmann::json(grid).dump(2) + "\n");
}

fs::path kernel_sidecar_path(const fs::path& bin_path) {
  fs::path p = bin_path;
  p += ".json";
  return p;
}

void write_kernel(const fs::path& bin_path, const Kernel& k) {
  {
    auto os = open_out(bin_path);
    put_le<std::uint32_t>(os, kKernelFormatVersion);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(k.size()));
    put_le<double>(os, k.duration());
    put_le<double>(os, k.hbar());
    for (const auto& e : k.entries()) {
      put_le<double>(os, e.real());
      put_le<double>(os, e.imag());
    }
    if (!os) throw std::runtime_error("write failed: " + bin_path.string());
  }
  const nlohmann::json meta{{"format_version", kKernelFormatVersion},
                            {"layout", "row-major (final, initial), complex128 little-endian"},
                            {"header_bytes", 24},
                            {"count", k.size()},
                            {"dt", k.duration()},
                            {"hbar", k.hbar()},
                            {"provenance", to_string(k.provenance())},
                            {"grid", k.grid()}};
  write_text(kernel_sidecar_path(bin_path), meta.dump(2) + "\n");
}

Kernel read_kernel(const fs::path& bin_path) {
  const auto meta = nlohmann::json::parse(read_text(kernel_sidecar_path(bin_path)));
  std::ifstream is(bin_path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + bin_path.string());
  const auto version = get_le<std::uint32_t>(is);
  if (version != kKernelFormatVersion)
    throw InvalidArgument("unsupported kernel format version " + std::to_string(version));
  const auto count = get_le<std::uint32_t>(is);
  const double dt = get_le<double>(is);
  const double hbar = get_le<double>(is);
  const SpatialGrid grid = spatial_grid_from_json(meta.at("grid"));
  if (grid.count() != count) throw GridMismatchError("kernel sidecar disagrees with header");
  std::vector<cplx> e(static_cast<std::size_t>(count) * count);
  for (auto& v : e) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    v = {re, im};
  }
  KernelProvenance prov = KernelProvenance::composed;
  const std::string p = meta.value("provenance", "composed");
  for (auto cand : {KernelProvenance::from_density, KernelProvenance::analytic_short_time,
                    KernelProvenance::band_limited, KernelProvenance::composed,
                    KernelProvenance::identity})
    if (to_string(cand) == p) prov = cand;
  return Kernel(grid, std::move(e), dt, hbar, prov);
}

void write_trace_csv(const fs::path& path, const EvolutionTrace& trace,
                     const LagrangianSpec& lagrangian) {
  std::ostringstream os;
  os << "t,norm,residual,x,p,H\n";
  for (std::size_t n = 0; n < trace.snapshots.size(); ++n) {
    const auto& psi = trace.snapshots[n];
    const auto ex = expectations(psi, lagrangian);
    const double r = n < trace.residuals.size() ? trace.residuals[n] : std::nan("");
    os << format_double(psi.time()) << ',' << format_double(trace.norms[n]) << ','
       << format_double(r) << ',' << format_double(ex.x) << ',' << format_double(ex.p) << ','
       << format_double(ex.energy) << '\n';
  }
  write_text(path, os.str());
}

void write_snapshot_csv(const fs::path& path, const WaveFunction& psi) {
  std::ostringstream os;
  os << "x,re,im\n";
  for (std::size_t i = 0; i < psi.grid().count(); ++i)
    os << format_double(psi.grid()[i]) << ',' << format_double(psi.samples()[i].real()) << ','
       << format_double(psi.samples()[i].imag()) << '\n';
  write_text(path, os.str());
}

void write_path_csv(const fs::path& path, const DiscretePath& p) {
  std::ostringstream os;
  os << "t,x\n";
  for (std::size_t k = 0; k < p.positions.size(); ++k)
    os << format_double(static_cast<double>(k) * p.dt) << ',' << format_double(p.positions[k])
       << '\n';
  write_text(path, os.str());
}

void write_histogram_csv(const fs::path& path, const PathHistogram& hist) {
  std::ostringstream os;
  os << "A,g_emp,bin_mass,bin_mean\n";
  for (std::size_t j = 0; j < hist.bins.count(); ++j)
    os << format_double(hist.bins[j]) << ',' << format_double(hist.density[j]) << ','
       << format_double(hist.bin_mass[j]) << ',' << format_double(hist.bin_mean[j]) << '\n';
  write_text(path, os.str());
}

std::vector<FringeMeasurement> read_measurements_csv(const fs::path& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::vector<std::string> header;
  std::vector<FringeMeasurement> out;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = boost::algorithm::trim_copy(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split_csv(t);
    if (header.empty()) {
      header = f;
      for (const char* want : {"p", "d", "D", "dy"})
        if (std::find(header.begin(), header.end(), want) == header.end())
          throw InvalidArgument(std::string("measurement CSV lacks column ") + want);
      continue;
    }
    if (f.size() != header.size())
      throw InvalidArgument("measurement CSV line " + std::to_string(lineno) +
                            " has the wrong number of fields");
    FringeMeasurement m{};
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double v = parse_double(f[c]);
      if (header[c] == "p") m.p = v;
      else if (header[c] == "d") m.d = v;
      else if (header[c] == "D") m.D = v;
      else if (header[c] == "dy") m.dy = v;
    }
    out.push_back(m);
  }
  if (header.empty()) throw InvalidArgument("measurement CSV is empty");
  return out;
}

}  // namespace actlab::io
