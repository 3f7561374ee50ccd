#include "darkring/sweep.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace darkring {

CavityConfig cell_config(const CavityConfig& base, double smf_length_m,
                         double gain_per_km) {
  CavityConfig cfg = base;
  bool found_smf = false;
  for (auto& s : cfg.segments) {
    if (s.name == "SMF") {
      s.length_km = smf_length_m * 1e-3;
      found_smf = true;
    }
    if (s.small_signal_gain > 0.0) s.small_signal_gain = gain_per_km;
  }
  if (!found_smf)
    throw std::invalid_argument("cell_config: base config has no SMF segment");
  return cfg;
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t length_index,
                        std::size_t gain_index) {
  // splitmix64 mix of the cell coordinates into the base seed.
  std::uint64_t x = base_seed + 0x9e3779b97f4a7c15ull * (length_index + 1) +
                    0xbf58476d1ce4e5b9ull * (gain_index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

RegionMap run_sweep(const SweepSpec& spec,
                    const std::set<std::pair<std::size_t, std::size_t>>* skip) {
  if (spec.smf_lengths_m.empty() || spec.gains_per_km.empty())
    throw std::invalid_argument("run_sweep: empty sweep axes");
  const std::size_t nl = spec.smf_lengths_m.size();
  const std::size_t ng = spec.gains_per_km.size();

  RegionMap map;
  map.cells.resize(nl * ng);
  for (std::size_t li = 0; li < nl; ++li) {
    for (std::size_t gi = 0; gi < ng; ++gi) {
      SweepCell& c = map.cells[li * ng + gi];
      c.length_index = li;
      c.gain_index = gi;
      c.smf_length_m = spec.smf_lengths_m[li];
      c.gain_per_km = spec.gains_per_km[gi];
      c.skipped = skip && skip->count({li, gi}) > 0;
    }
  }

  auto run_cell = [&](SweepCell& c) {
    try {
      CavityConfig cfg = cell_config(spec.base, c.smf_length_m, c.gain_per_km);
      cfg.seed = cell_seed(spec.base.seed, c.length_index, c.gain_index);
      c.net_dispersion_ps2 = net_dispersion(cfg);
      Cavity cav(cfg);
      TimeGrid grid = make_grid(cfg.grid_samples, cfg.window_ps);
      VectorField f0 = init_cw_with_dip(grid, cfg.init_cw_power_w,
                                        cfg.init_dip_depth, cfg.init_dip_width_ps,
                                        cfg.init_noise_amplitude, cfg.seed);
      RunResult run = cav.run_to_steady_state(
          std::move(f0), spec.classify_opts.depth_threshold);
      ClassifyOptions opts = spec.classify_opts;
      opts.lambda0_nm = cfg.lambda0_nm;
      c.state = classify(run, opts);
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, spec.workers);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= map.cells.size()) return;
      if (!map.cells[i].skipped) run_cell(map.cells[i]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return map;
}

double bisect_boundary(const std::function<bool(double)>& low_side, double lo,
                       double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_boundary: tol must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("bisect_boundary: need lo < hi");
  if (!low_side(lo) || low_side(hi))
    throw std::invalid_argument("bisect_boundary: bracket failure, predicate "
                                "must hold at lo and fail at hi");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (low_side(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double find_split_threshold(const CavityConfig& cfg,
                            const ClassifyOptions& opts, double gain_lo,
                            double gain_hi, double tol) {
  auto single_dark_at = [&](double gain) {
    CavityConfig c = cfg;
    for (auto& s : c.segments)
      if (s.small_signal_gain > 0.0) s.small_signal_gain = gain;
    Cavity cav(c);
    TimeGrid grid = make_grid(c.grid_samples, c.window_ps);
    VectorField f0 = init_cw_with_dip(grid, c.init_cw_power_w, c.init_dip_depth,
                                      c.init_dip_width_ps,
                                      c.init_noise_amplitude, c.seed);
    RunResult run =
        cav.run_to_steady_state(std::move(f0), opts.depth_threshold);
    ClassifyOptions o = opts;
    o.lambda0_nm = c.lambda0_nm;
    return classify(run, o).label == StateLabel::single_dark;
  };
  return bisect_boundary(single_dark_at, gain_lo, gain_hi, tol);
}

}  // namespace darkring
