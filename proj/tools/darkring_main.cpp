#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "darkring/classify.hpp"
#include "darkring/config.hpp"
#include "darkring/io.hpp"
#include "darkring/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

darkring::ParsedConfig load_config(const std::string& path) {
  if (path.empty()) {
    darkring::ParsedConfig p;
    p.cavity = darkring::default_cavity_config();
    return p;
  }
  return darkring::parse_config_file(path);
}

json meta_json(const darkring::CavityConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["config_hash"] = darkring::config_hash(cfg);
  j["seed"] = cfg.seed;
  j["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  j["net_dispersion_ps2"] = darkring::net_dispersion(cfg);
  json segs = json::array();
  const double total_m = cfg.total_length_m();
  for (const auto& s : cfg.segments) {
    const auto c = darkring::derive_coefficients(s, cfg.lambda0_nm, total_m);
    segs.push_back({{"name", s.name},
                    {"length_km", s.length_km},
                    {"dispersion_D", s.dispersion_D},
                    {"beta2_ps2_per_km", c.beta2},
                    {"beta3_ps3_per_km", c.beta3},
                    {"beta_bi_rad_per_km", c.beta_bi},
                    {"delta_ps_per_km", c.delta},
                    {"omega_g_rad_per_ps", c.omega_g},
                    {"gamma", s.gamma},
                    {"small_signal_gain_per_km", s.small_signal_gain},
                    {"sat_energy_pj", s.sat_energy_pj}});
  }
  j["segments"] = segs;
  // Full resolved input set, defaults included.
  json cfgdump = json::object();
  std::istringstream lines(darkring::render_config(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos)
      cfgdump[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["config"] = cfgdump;
  return j;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            long long seed, std::size_t snapshot_every) {
  darkring::ParsedConfig parsed = load_config(config_path);
  darkring::CavityConfig cfg = parsed.cavity;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

  fs::create_directories(out_dir);
  darkring::Cavity cav(cfg);
  darkring::TimeGrid grid = darkring::make_grid(cfg.grid_samples, cfg.window_ps);
  darkring::VectorField f0 = darkring::init_cw_with_dip(
      grid, cfg.init_cw_power_w, cfg.init_dip_depth, cfg.init_dip_width_ps,
      cfg.init_noise_amplitude, cfg.seed);

  darkring::Cavity::TripObserver observer;
  if (snapshot_every > 0) {
    observer = [&](std::size_t trip, const darkring::VectorField& f) {
      if (trip % snapshot_every == 0) {
        char name[64];
        std::snprintf(name, sizeof(name), "field_trip_%06zu.bin", trip);
        darkring::write_field_snapshot((fs::path(out_dir) / name).string(), f);
      }
    };
  }

  darkring::RunResult run = cav.run_to_steady_state(
      std::move(f0), parsed.classify_opts.depth_threshold, observer);
  darkring::ClassifyOptions opts = parsed.classify_opts;
  opts.lambda0_nm = cfg.lambda0_nm;
  darkring::StateClassification state = darkring::classify(run, opts);

  darkring::write_trace_csv((fs::path(out_dir) / "trace.csv").string(),
                            run.trace);
  darkring::write_field_snapshot(
      (fs::path(out_dir) / "final_field.bin").string(), run.field);
  darkring::write_classification_csv(
      (fs::path(out_dir) / "classification.csv").string(), state, "run");

  json meta = meta_json(cfg);
  meta["trips_run"] = run.trips_run;
  meta["status"] = run.status == darkring::RunStatus::converged
                       ? "converged"
                       : (run.status == darkring::RunStatus::extinguished
                              ? "extinguished"
                              : "not_converged");
  meta["label"] = darkring::to_string(state.label);
  std::ofstream meta_out(fs::path(out_dir) / "meta.json");
  meta_out << meta.dump(2) << '\n';

  std::cout << "status: " << meta["status"].get<std::string>()
            << "  label: " << darkring::to_string(state.label)
            << "  trips: " << run.trips_run
            << "  pulses: " << state.pulses.size() << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              long long seed, unsigned workers, bool resume) {
  darkring::ParsedConfig parsed = load_config(config_path);
  darkring::SweepSpec spec =
      parsed.sweep ? *parsed.sweep : darkring::default_sweep_spec();
  if (!parsed.sweep) {
    spec.base = parsed.cavity;
    spec.classify_opts = parsed.classify_opts;
  }
  if (seed >= 0) spec.base.seed = static_cast<std::uint64_t>(seed);
  if (workers > 0) spec.workers = workers;

  fs::create_directories(out_dir);
  const std::string map_path = (fs::path(out_dir) / "region_map.csv").string();

  std::vector<darkring::RegionRow> existing;
  std::set<std::pair<std::size_t, std::size_t>> skip;
  if (resume && fs::exists(map_path)) {
    existing = darkring::read_region_map_rows(map_path);
    auto close = [](double a, double b) {
      return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a));
    };
    for (std::size_t li = 0; li < spec.smf_lengths_m.size(); ++li)
      for (std::size_t gi = 0; gi < spec.gains_per_km.size(); ++gi)
        for (const auto& r : existing)
          if (close(r.smf_length_m, spec.smf_lengths_m[li]) &&
              close(r.gain_per_km, spec.gains_per_km[gi]))
            skip.insert({li, gi});
  }

  darkring::RegionMap map = darkring::run_sweep(spec, skip.empty() ? nullptr : &skip);

  std::vector<darkring::RegionRow> rows;
  for (const auto& cell : map.cells) {
    if (cell.skipped) {
      auto close = [](double a, double b) {
        return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a));
      };
      for (const auto& r : existing)
        if (close(r.smf_length_m, cell.smf_length_m) &&
            close(r.gain_per_km, cell.gain_per_km)) {
          rows.push_back(r);
          break;
        }
    } else {
      rows.push_back(darkring::to_region_row(cell));
    }
  }

  std::vector<std::string> metadata = {
      std::string("darkring region map, version ") + kVersion,
      "config_hash: " + darkring::config_hash(spec.base),
      "seed: " + std::to_string(spec.base.seed),
      "grid: " + std::to_string(spec.smf_lengths_m.size()) + " smf lengths x " +
          std::to_string(spec.gains_per_km.size()) + " gains",
  };
  darkring::write_region_map_csv(map_path, rows, metadata);

  std::size_t errors = 0;
  for (const auto& r : rows)
    if (r.label == "error") ++errors;
  std::cout << "sweep: " << rows.size() << " cells written, " << skip.size()
            << " resumed, " << errors << " errors\n";
  return 0;
}

int cmd_analyze(const std::string& config_path, const std::string& snapshot) {
  darkring::ParsedConfig parsed = load_config(config_path);
  darkring::RunResult run;
  run.field = darkring::read_field_snapshot(snapshot);
  run.status = darkring::RunStatus::converged;
  darkring::ClassifyOptions opts = parsed.classify_opts;
  opts.lambda0_nm = parsed.cavity.lambda0_nm;
  darkring::StateClassification state = darkring::classify(run, opts);

  std::cout << "label: " << darkring::to_string(state.label) << '\n'
            << "cw_level_w: " << state.cw_level_w << '\n'
            << "spectral_bw_3db_nm: " << state.spectral_bw_3db_nm
            << (state.bandwidth_grid_limited ? " (grid-limited)" : "") << '\n';
  if (state.tbp > 0.0) std::cout << "tbp: " << state.tbp << '\n';
  std::cout << "pulses: " << state.pulses.size() << '\n';
  if (!state.pulses.empty()) {
    std::cout << "index,position_ps,fwhm_ps,modulation_depth\n";
    for (std::size_t i = 0; i < state.pulses.size(); ++i) {
      const auto& p = state.pulses[i];
      std::cout << i << ',' << p.position_ps << ',' << p.fwhm_ps << ','
                << p.modulation_depth << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"darkring: dark-soliton fiber ring laser simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", snapshot_path;
  long long seed = -1;
  unsigned workers = 0;
  std::size_t snapshot_every = 0;
  bool resume = false;

  auto* run = app.add_subcommand("run", "single cavity run to steady state");
  run->add_option("--config", config_path, "config file path");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--snapshot-every", snapshot_every,
                  "trips between field snapshots (0 = final only)");

  auto* sweep = app.add_subcommand("sweep", "(dispersion x gain) region map");
  sweep->add_option("--config", config_path, "config file path");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed, "seed override");
  sweep->add_option("--workers", workers, "worker thread count");
  sweep->add_flag("--resume", resume, "skip cells already in region_map.csv");

  auto* analyze = app.add_subcommand("analyze", "re-analyze a stored field");
  analyze->add_option("snapshot", snapshot_path, "field snapshot path")
      ->required();
  analyze->add_option("--config", config_path, "config file path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed, snapshot_every);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_dir, seed, workers, resume);
    if (analyze->parsed()) return cmd_analyze(config_path, snapshot_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
