#pragma once

#include <string>
#include <vector>

#include "darkring/analysis.hpp"
#include "darkring/cavity.hpp"
#include "darkring/sweep.hpp"

namespace darkring {

/// Binary field snapshot, layout documented in docs/formats.md:
/// magic "DRFIELD1", u64 n_samples, f64 window_ps, u32 component count (2),
/// then little-endian f64 (re, im) pairs for u, then for v.
void write_field_snapshot(const std::string& path, const VectorField& f);
VectorField read_field_snapshot(const std::string& path);

void write_trace_csv(const std::string& path, const RoundTripTrace& trace);
RoundTripTrace read_trace_csv(const std::string& path);

void write_classification_csv(const std::string& path,
                              const StateClassification& c,
                              const std::string& run_id);

/// One region-map CSV data row. Failed cells carry label "error" and the
/// message; skipped cells never reach the file.
struct RegionRow {
  double smf_length_m = 0.0;
  double net_dispersion_ps2 = 0.0;
  double gain_per_km = 0.0;
  std::string label;
  std::size_t pulse_count = 0;
  double depth_max = 0.0;
  double fwhm_ps = 0.0;
  double bandwidth_nm = 0.0;
};

RegionRow to_region_row(const SweepCell& cell);

/// Region map CSV with a '#'-prefixed metadata header block.
void write_region_map_csv(const std::string& path,
                          const std::vector<RegionRow>& rows,
                          const std::vector<std::string>& metadata);
/// Data rows only; metadata lines are skipped. Used for --resume.
std::vector<RegionRow> read_region_map_rows(const std::string& path);

}  // namespace darkring
