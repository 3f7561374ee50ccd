#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "darkring/cavity.hpp"
#include "darkring/classify.hpp"

namespace darkring {

/// Grid over SMF length (the experimental knob behind the net-dispersion
/// axis) and small-signal gain.
struct SweepSpec {
  std::vector<double> smf_lengths_m;
  std::vector<double> gains_per_km;
  CavityConfig base;
  ClassifyOptions classify_opts;
  unsigned workers = 1;
};

struct SweepCell {
  std::size_t length_index = 0;
  std::size_t gain_index = 0;
  double smf_length_m = 0.0;
  double net_dispersion_ps2 = 0.0;
  double gain_per_km = 0.0;
  StateClassification state;
  bool skipped = false;
  std::string error;  // empty on success

  bool ok() const { return error.empty() && !skipped; }
};

struct RegionMap {
  std::vector<SweepCell> cells;  // gain-major within each length

  const SweepCell& at(std::size_t li, std::size_t gi, std::size_t n_gains) const {
    return cells[li * n_gains + gi];
  }
};

/// Copy of the base config with the SMF segment set to the given length
/// and every gain segment's small-signal gain replaced.
CavityConfig cell_config(const CavityConfig& base, double smf_length_m,
                         double gain_per_km);

/// Seed for one sweep cell, independent of execution order.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t length_index,
                        std::size_t gain_index);

/// Run every (length, gain) cell to steady state and classify it. Cells in
/// `skip` are marked skipped and not computed. Per-cell failures are
/// recorded in the map; the sweep never aborts. Deterministic for a fixed
/// base seed regardless of worker count.
RegionMap run_sweep(const SweepSpec& spec,
                    const std::set<std::pair<std::size_t, std::size_t>>* skip = nullptr);

/// Generic bisection: `low_side(x)` must be true at lo and false at hi;
/// returns the boundary to within tol.
double bisect_boundary(const std::function<bool(double)>& low_side, double lo,
                       double hi, double tol);

/// Bisect the gain at which the steady state stops being a single dark
/// pulse. Requires single_dark at gain_lo and anything else at gain_hi.
double find_split_threshold(const CavityConfig& cfg,
                            const ClassifyOptions& opts, double gain_lo,
                            double gain_hi, double tol);

}  // namespace darkring
