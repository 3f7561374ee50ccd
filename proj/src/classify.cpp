#include "darkring/classify.hpp"

#include <algorithm>
#include <cmath>

namespace darkring {

namespace {

// Shortest periodic distance between two positions on the window.
double wrap_dist(double a, double b, double window) {
  double d = std::fabs(a - b);
  return std::min(d, window - d);
}

// True when dip count stays constant and each dip drifts by at most
// max_drift per trip across the recorded window.
bool window_is_stable(const std::vector<PulseSnapshot>& snaps, double window_ps,
                      double max_drift_ps) {
  if (snaps.size() < 2) return true;
  const std::size_t count = snaps.back().positions_ps.size();
  for (const auto& s : snaps)
    if (s.positions_ps.size() != count) return false;
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    for (double pos : snaps[k].positions_ps) {
      double best = window_ps;
      for (double prev : snaps[k - 1].positions_ps)
        best = std::min(best, wrap_dist(pos, prev, window_ps));
      if (count > 0 && best > max_drift_ps) return false;
    }
  }
  return true;
}

}  // namespace

StateClassification classify(const RunResult& run, const ClassifyOptions& opt) {
  StateClassification c;
  const double energy = total_energy(run.field);
  if (energy <= opt.extinguished_energy_pj) {
    c.label = StateLabel::extinguished;
    return c;
  }

  const std::vector<double> p = power_profile(run.field);
  c.cw_level_w = estimate_background(p);
  c.pulses = find_dark_pulses(run.field, opt.depth_threshold);
  const Bandwidth bw = spectral_bandwidth_3db(run.field, opt.lambda0_nm);
  c.spectral_bw_3db_nm = bw.nm;
  c.bandwidth_grid_limited = bw.grid_limited;
  if (c.pulses.size() == 1 && !bw.grid_limited)
    c.tbp = time_bandwidth_product(c.pulses.front().fwhm_ps, bw.nm,
                                   opt.lambda0_nm);

  if (run.status == RunStatus::not_converged) {
    c.label = StateLabel::not_converged;
    return c;
  }

  const double max_drift_ps =
      opt.max_drift_samples_per_trip * run.field.grid.dt_ps;
  if (!window_is_stable(run.recent_pulses, run.field.grid.window_ps,
                        max_drift_ps)) {
    c.label = StateLabel::unstable;
    return c;
  }

  if (c.pulses.empty())
    c.label = StateLabel::cw;
  else if (c.pulses.size() == 1)
    c.label = StateLabel::single_dark;
  else
    c.label = StateLabel::multiple_dark;
  return c;
}

}  // namespace darkring
