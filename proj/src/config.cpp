#include "darkring/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "darkring/constants.hpp"

namespace darkring {

namespace {

FiberSegment make_edf(double length_m, double gain) {
  FiberSegment s;
  s.name = "EDF";
  s.length_km = length_m * 1e-3;
  s.dispersion_D = -32.0;
  s.third_order_D = 0.1;
  s.gamma = 3.0;
  s.small_signal_gain = gain;
  s.sat_energy_pj = 500.0;
  s.gain_bandwidth_nm = 24.0;
  s.beat_length_ratio = 0.01;
  return s;
}

FiberSegment make_passive(const std::string& name, double length_m, double D) {
  FiberSegment s;
  s.name = name;
  s.length_km = length_m * 1e-3;
  s.dispersion_D = D;
  s.third_order_D = 0.1;
  s.gamma = 3.0;
  s.beat_length_ratio = 0.01;
  return s;
}

}  // namespace

CavityConfig default_cavity_config() {
  CavityConfig cfg;
  cfg.segments = {make_edf(5.0, 485.0), make_passive("SMF", 8.0, 18.0),
                  make_passive("DCF", 5.2, -2.0)};
  cfg.polarizer_angle_rad = 0.13 * kPi;
  cfg.phase_bias_rad = 1.6 * kPi;
  cfg.coupler_out = 0.5;
  cfg.lambda0_nm = 1565.0;
  cfg.grid_samples = 8192;
  cfg.window_ps = 200.0;
  cfg.step.step_size_km = 1e-4;
  cfg.max_round_trips = 2000;
  cfg.convergence_tol = 1e-6;
  cfg.convergence_window = 50;
  cfg.init_cw_power_w = 0.1;
  cfg.init_dip_depth = 0.5;
  cfg.init_dip_width_ps = 2.0;
  cfg.init_noise_amplitude = 1e-3;
  cfg.seed = 1;
  return cfg;
}

SweepSpec default_sweep_spec() {
  SweepSpec spec;
  spec.base = default_cavity_config();
  spec.smf_lengths_m = {0.0, 2.0, 4.0, 6.0, 7.6, 8.0, 9.0, 10.0};
  const double g_lo = 400.0, g_hi = 650.0;
  for (int i = 0; i < 8; ++i)
    spec.gains_per_km.push_back(g_lo + (g_hi - g_lo) * i / 7.0);
  spec.workers = 1;
  return spec;
}

namespace {

struct KeyValue {
  std::string value;
  int line = 0;
  mutable bool used = false;
};

using Sections = std::map<std::string, std::map<std::string, KeyValue>>;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Sections tokenize(const std::string& text) {
  Sections out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": empty section name");
      out[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    if (section.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": key '" + key + "' outside any section");
    auto [it, inserted] = out[section].emplace(key, KeyValue{value, lineno});
    if (!inserted)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(const Sections& sections, const std::string& name)
      : name_(name) {
    auto it = sections.find(name);
    if (it != sections.end()) kv_ = &it->second;
  }

  bool present() const { return kv_ != nullptr; }

  const KeyValue* find(const std::string& key) const {
    if (!kv_) return nullptr;
    auto it = kv_->find(key);
    if (it == kv_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double number(const std::string& key, double fallback) const {
    const KeyValue* kv = find(key);
    if (!kv) return fallback;
    try {
      std::size_t pos = 0;
      const double x = std::stod(kv->value, &pos);
      if (pos != kv->value.size()) throw std::invalid_argument("trailing text");
      return x;
    } catch (const std::exception&) {
      throw std::runtime_error("config line " + std::to_string(kv->line) +
                               ": key '" + key + "' is not a number: '" +
                               kv->value + "'");
    }
  }

  std::vector<double> number_list(const std::string& key,
                                  std::vector<double> fallback) const {
    const KeyValue* kv = find(key);
    if (!kv) return fallback;
    std::vector<double> out;
    std::istringstream in(kv->value);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(kv->line) +
                                 ": key '" + key + "' has a non-numeric item '" +
                                 item + "'");
      }
    }
    if (out.empty())
      throw std::runtime_error("config line " + std::to_string(kv->line) +
                               ": key '" + key + "' is an empty list");
    return out;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const std::map<std::string, KeyValue>* kv_ = nullptr;
};

[[noreturn]] void range_error(const std::string& key, const std::string& why) {
  throw std::runtime_error("config key '" + key + "': " + why);
}

void reject_unknown(const Sections& sections,
                    const std::vector<std::string>& known) {
  for (const auto& [name, kv] : sections) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == name;
    if (!ok) throw std::runtime_error("config: unknown section [" + name + "]");
    for (const auto& [key, v] : kv)
      if (!v.used)
        throw std::runtime_error("config line " + std::to_string(v.line) +
                                 ": unknown key '" + key + "' in section [" +
                                 name + "]");
  }
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  const Sections sections = tokenize(text);
  ParsedConfig out;
  out.cavity = default_cavity_config();
  CavityConfig& cfg = out.cavity;

  SectionReader grid(sections, "grid");
  const double n_samples = grid.number("n_samples", static_cast<double>(cfg.grid_samples));
  if (n_samples < 2 || n_samples != std::floor(n_samples) ||
      (static_cast<std::size_t>(n_samples) &
       (static_cast<std::size_t>(n_samples) - 1)) != 0)
    range_error("n_samples", "must be a power of two >= 2");
  cfg.grid_samples = static_cast<std::size_t>(n_samples);
  cfg.window_ps = grid.number("window_ps", cfg.window_ps);
  if (!(cfg.window_ps > 0.0)) range_error("window_ps", "must be positive");

  SectionReader cav(sections, "cavity");
  cfg.lambda0_nm = cav.number("lambda0_nm", cfg.lambda0_nm);
  if (!(cfg.lambda0_nm > 0.0)) range_error("lambda0_nm", "must be positive");
  cfg.polarizer_angle_rad =
      cav.number("polarizer_angle_pi", cfg.polarizer_angle_rad / kPi) * kPi;
  cfg.phase_bias_rad =
      cav.number("phase_bias_pi", cfg.phase_bias_rad / kPi) * kPi;
  cfg.coupler_out = cav.number("coupler_out", cfg.coupler_out);
  if (!(cfg.coupler_out > 0.0 && cfg.coupler_out < 1.0))
    range_error("coupler_out", "must lie strictly between 0 and 1");

  FiberSegment& edf = cfg.segments[0];
  FiberSegment& smf = cfg.segments[1];
  FiberSegment& dcf = cfg.segments[2];
  edf.length_km = cav.number("edf_length_m", edf.length_km * 1e3) * 1e-3;
  smf.length_km = cav.number("smf_length_m", smf.length_km * 1e3) * 1e-3;
  dcf.length_km = cav.number("dcf_length_m", dcf.length_km * 1e3) * 1e-3;
  if (edf.length_km < 0 || smf.length_km < 0 || dcf.length_km < 0)
    range_error("*_length_m", "segment lengths must be >= 0");
  edf.dispersion_D = cav.number("edf_dispersion", edf.dispersion_D);
  smf.dispersion_D = cav.number("smf_dispersion", smf.dispersion_D);
  dcf.dispersion_D = cav.number("dcf_dispersion", dcf.dispersion_D);
  const double d3 = cav.number("third_order_dispersion", edf.third_order_D);
  const double gamma = cav.number("gamma", edf.gamma);
  if (gamma < 0.0) range_error("gamma", "must be >= 0");
  const double beat = cav.number("beat_length_ratio", edf.beat_length_ratio);
  if (beat < 0.0) range_error("beat_length_ratio", "must be >= 0");
  for (auto& s : cfg.segments) {
    s.third_order_D = d3;
    s.gamma = gamma;
    s.beat_length_ratio = beat;
  }
  edf.small_signal_gain = cav.number("gain_per_km", edf.small_signal_gain);
  if (!(edf.small_signal_gain > 0.0))
    range_error("gain_per_km", "the cavity needs at least one gain segment");
  edf.sat_energy_pj = cav.number("sat_energy_pj", edf.sat_energy_pj);
  if (edf.small_signal_gain > 0.0 && !(edf.sat_energy_pj > 0.0))
    range_error("sat_energy_pj", "must be positive when gain is nonzero");
  edf.gain_bandwidth_nm = cav.number("gain_bandwidth_nm", edf.gain_bandwidth_nm);
  if (edf.gain_bandwidth_nm < 0.0)
    range_error("gain_bandwidth_nm", "must be >= 0");

  SectionReader solver(sections, "solver");
  cfg.step.step_size_km = solver.number("step_size_m", cfg.step.step_size_km * 1e3) * 1e-3;
  if (!(cfg.step.step_size_km > 0.0)) range_error("step_size_m", "must be positive");
  const double max_trips =
      solver.number("max_round_trips", static_cast<double>(cfg.max_round_trips));
  if (max_trips < 1) range_error("max_round_trips", "must be >= 1");
  cfg.max_round_trips = static_cast<std::size_t>(max_trips);
  cfg.convergence_tol = solver.number("convergence_tol", cfg.convergence_tol);
  if (!(cfg.convergence_tol > 0.0)) range_error("convergence_tol", "must be positive");
  const double win = solver.number("convergence_window",
                                   static_cast<double>(cfg.convergence_window));
  if (win < 1) range_error("convergence_window", "must be >= 1");
  cfg.convergence_window = static_cast<std::size_t>(win);

  SectionReader init(sections, "init");
  cfg.init_cw_power_w = init.number("cw_power_w", cfg.init_cw_power_w);
  if (cfg.init_cw_power_w < 0.0) range_error("cw_power_w", "must be >= 0");
  cfg.init_dip_depth = init.number("dip_depth", cfg.init_dip_depth);
  if (cfg.init_dip_depth < 0.0 || cfg.init_dip_depth > 1.0)
    range_error("dip_depth", "must lie in [0, 1]");
  cfg.init_dip_width_ps = init.number("dip_width_ps", cfg.init_dip_width_ps);
  if (!(cfg.init_dip_width_ps > 0.0)) range_error("dip_width_ps", "must be positive");
  cfg.init_noise_amplitude = init.number("noise_amplitude", cfg.init_noise_amplitude);
  if (cfg.init_noise_amplitude < 0.0) range_error("noise_amplitude", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(init.number("seed", static_cast<double>(cfg.seed)));
  cfg.trip_noise_amplitude =
      init.number("trip_noise_amplitude", cfg.trip_noise_amplitude);
  if (cfg.trip_noise_amplitude < 0.0)
    range_error("trip_noise_amplitude", "must be >= 0");

  SectionReader analysis(sections, "analysis");
  out.classify_opts.depth_threshold =
      analysis.number("depth_threshold", out.classify_opts.depth_threshold);
  if (!(out.classify_opts.depth_threshold > 0.0 &&
        out.classify_opts.depth_threshold < 1.0))
    range_error("depth_threshold", "must lie strictly between 0 and 1");
  out.classify_opts.lambda0_nm = cfg.lambda0_nm;

  SectionReader sweep(sections, "sweep");
  if (sweep.present()) {
    SweepSpec spec = default_sweep_spec();
    spec.base = cfg;
    spec.classify_opts = out.classify_opts;
    spec.smf_lengths_m = sweep.number_list("smf_lengths_m", spec.smf_lengths_m);
    for (double l : spec.smf_lengths_m)
      if (l < 0.0) range_error("smf_lengths_m", "lengths must be >= 0");
    spec.gains_per_km = sweep.number_list("gains_per_km", spec.gains_per_km);
    for (double g : spec.gains_per_km)
      if (g < 0.0) range_error("gains_per_km", "gains must be >= 0");
    const double workers = sweep.number("workers", spec.workers);
    if (workers < 1) range_error("workers", "must be >= 1");
    spec.workers = static_cast<unsigned>(workers);
    out.sweep = std::move(spec);
  }

  reject_unknown(sections, {"grid", "cavity", "solver", "init", "analysis", "sweep"});
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const CavityConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "grid.n_samples=" << cfg.grid_samples << '\n'
      << "grid.window_ps=" << cfg.window_ps << '\n'
      << "cavity.lambda0_nm=" << cfg.lambda0_nm << '\n'
      << "cavity.polarizer_angle_rad=" << cfg.polarizer_angle_rad << '\n'
      << "cavity.phase_bias_rad=" << cfg.phase_bias_rad << '\n'
      << "cavity.coupler_out=" << cfg.coupler_out << '\n';
  for (const auto& s : cfg.segments) {
    out << "segment." << s.name << ".length_km=" << s.length_km << '\n'
        << "segment." << s.name << ".dispersion_D=" << s.dispersion_D << '\n'
        << "segment." << s.name << ".third_order_D=" << s.third_order_D << '\n'
        << "segment." << s.name << ".gamma=" << s.gamma << '\n'
        << "segment." << s.name << ".gain=" << s.small_signal_gain << '\n'
        << "segment." << s.name << ".sat_energy_pj=" << s.sat_energy_pj << '\n'
        << "segment." << s.name << ".gain_bandwidth_nm=" << s.gain_bandwidth_nm << '\n'
        << "segment." << s.name << ".beat_length_ratio=" << s.beat_length_ratio << '\n';
  }
  out << "solver.step_size_km=" << cfg.step.step_size_km << '\n'
      << "solver.max_round_trips=" << cfg.max_round_trips << '\n'
      << "solver.convergence_tol=" << cfg.convergence_tol << '\n'
      << "solver.convergence_window=" << cfg.convergence_window << '\n'
      << "init.cw_power_w=" << cfg.init_cw_power_w << '\n'
      << "init.dip_depth=" << cfg.init_dip_depth << '\n'
      << "init.dip_width_ps=" << cfg.init_dip_width_ps << '\n'
      << "init.noise_amplitude=" << cfg.init_noise_amplitude << '\n'
      << "init.seed=" << cfg.seed << '\n'
      << "init.trip_noise_amplitude=" << cfg.trip_noise_amplitude << '\n';
  return out.str();
}

std::string config_hash(const CavityConfig& cfg) {
  const std::string s = render_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace darkring
