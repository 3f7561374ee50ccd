#include "darkring/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace darkring {

namespace {

constexpr char kMagic[8] = {'D', 'R', 'F', 'I', 'E', 'L', 'D', '1'};

void write_raw(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::istream& in, void* p, std::size_t n,
              const std::string& what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw std::runtime_error("field snapshot: truncated while reading " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw std::runtime_error("csv: non-numeric field for " + what + ": '" + s + "'");
  }
}

}  // namespace

void write_field_snapshot(const std::string& path, const VectorField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_raw(out, kMagic, sizeof(kMagic));
  const std::uint64_t n = f.grid.n_samples;
  const double window = f.grid.window_ps;
  const std::uint32_t components = 2;
  write_raw(out, &n, sizeof(n));
  write_raw(out, &window, sizeof(window));
  write_raw(out, &components, sizeof(components));
  auto dump = [&](const std::vector<std::complex<double>>& a) {
    for (const auto& x : a) {
      const double re = x.real(), im = x.imag();
      write_raw(out, &re, sizeof(re));
      write_raw(out, &im, sizeof(im));
    }
  };
  dump(f.u);
  dump(f.v);
  if (!out) throw std::runtime_error("write failure on: " + path);
}

VectorField read_field_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[8];
  read_raw(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("field snapshot: bad magic in " + path);
  std::uint64_t n = 0;
  double window = 0.0;
  std::uint32_t components = 0;
  read_raw(in, &n, sizeof(n), "n_samples");
  read_raw(in, &window, sizeof(window), "window");
  read_raw(in, &components, sizeof(components), "component count");
  if (components != 2)
    throw std::runtime_error("field snapshot: expected 2 components, got " +
                             std::to_string(components));
  if (n < 2 || (n & (n - 1)) != 0 || !(window > 0.0))
    throw std::runtime_error("field snapshot: invalid header in " + path);

  VectorField f = make_zero_field(make_grid(static_cast<std::size_t>(n), window));
  auto load = [&](std::vector<std::complex<double>>& a, const char* what) {
    for (auto& x : a) {
      double re = 0.0, im = 0.0;
      read_raw(in, &re, sizeof(re), what);
      read_raw(in, &im, sizeof(im), what);
      x = {re, im};
    }
  };
  load(f.u, "u samples");
  load(f.v, "v samples");
  char extra;
  if (in.read(&extra, 1) && in.gcount() == 1)
    throw std::runtime_error("field snapshot: trailing bytes in " + path);
  return f;
}

void write_trace_csv(const std::string& path, const RoundTripTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "trip,energy_pj,cw_level_w,residual\n";
  out << std::setprecision(17);
  for (const auto& e : trace.entries)
    out << e.trip << ',' << e.energy_pj << ',' << e.cw_level_w << ','
        << e.residual << '\n';
}

RoundTripTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "trip,energy_pj,cw_level_w,residual")
    throw std::runtime_error("trace csv: bad header in " + path);
  RoundTripTrace t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 4)
      throw std::runtime_error("trace csv: expected 4 columns: " + line);
    TraceEntry e;
    e.trip = static_cast<std::size_t>(to_double(cols[0], "trip"));
    e.energy_pj = to_double(cols[1], "energy_pj");
    e.cw_level_w = to_double(cols[2], "cw_level_w");
    e.residual = to_double(cols[3], "residual");
    t.entries.push_back(e);
  }
  return t;
}

void write_classification_csv(const std::string& path,
                              const StateClassification& c,
                              const std::string& run_id) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "run_id,label,pulse_count,cw_level_w,spectral_bw_3db_nm,tbp,"
         "pulse_index,position_ps,fwhm_ps,modulation_depth\n";
  out << std::setprecision(17);
  auto prefix = [&]() -> std::ostream& {
    out << run_id << ',' << to_string(c.label) << ',' << c.pulses.size() << ','
        << c.cw_level_w << ',' << c.spectral_bw_3db_nm << ',' << c.tbp << ',';
    return out;
  };
  if (c.pulses.empty()) {
    prefix() << ",,,\n";
    return;
  }
  for (std::size_t i = 0; i < c.pulses.size(); ++i) {
    const auto& p = c.pulses[i];
    prefix() << i << ',' << p.position_ps << ',' << p.fwhm_ps << ','
             << p.modulation_depth << '\n';
  }
}

RegionRow to_region_row(const SweepCell& cell) {
  RegionRow r;
  r.smf_length_m = cell.smf_length_m;
  r.net_dispersion_ps2 = cell.net_dispersion_ps2;
  r.gain_per_km = cell.gain_per_km;
  if (!cell.error.empty()) {
    r.label = "error";
  } else {
    r.label = to_string(cell.state.label);
    r.pulse_count = cell.state.pulses.size();
    for (const auto& p : cell.state.pulses) {
      if (p.modulation_depth > r.depth_max) {
        r.depth_max = p.modulation_depth;
        r.fwhm_ps = p.fwhm_ps;
      }
    }
    r.bandwidth_nm = cell.state.spectral_bw_3db_nm;
  }
  return r;
}

static const char* kRegionHeader =
    "smf_length_m,net_dispersion_ps2,gain_per_km,label,pulse_count,"
    "depth_max,fwhm_ps,bandwidth_nm";

void write_region_map_csv(const std::string& path,
                          const std::vector<RegionRow>& rows,
                          const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& m : metadata) out << "# " << m << '\n';
  out << kRegionHeader << '\n';
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << r.smf_length_m << ',' << r.net_dispersion_ps2 << ','
        << r.gain_per_km << ',' << r.label << ',' << r.pulse_count << ','
        << r.depth_max << ',' << r.fwhm_ps << ',' << r.bandwidth_nm << '\n';
}

std::vector<RegionRow> read_region_map_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open region map: " + path);
  std::vector<RegionRow> rows;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != kRegionHeader)
        throw std::runtime_error("region map csv: bad header in " + path);
      saw_header = true;
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() != 8)
      throw std::runtime_error("region map csv: expected 8 columns: " + line);
    RegionRow r;
    r.smf_length_m = to_double(cols[0], "smf_length_m");
    r.net_dispersion_ps2 = to_double(cols[1], "net_dispersion_ps2");
    r.gain_per_km = to_double(cols[2], "gain_per_km");
    r.label = cols[3];
    r.pulse_count = static_cast<std::size_t>(to_double(cols[4], "pulse_count"));
    r.depth_max = to_double(cols[5], "depth_max");
    r.fwhm_ps = to_double(cols[6], "fwhm_ps");
    r.bandwidth_nm = to_double(cols[7], "bandwidth_nm");
    rows.push_back(r);
  }
  if (!saw_header)
    throw std::runtime_error("region map csv: missing header in " + path);
  return rows;
}

}  // namespace darkring
