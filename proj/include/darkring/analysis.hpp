#pragma once

#include <string>
#include <vector>

#include "darkring/field_grid.hpp"

namespace darkring {

struct DarkPulse {
  double position_ps = 0.0;
  double fwhm_ps = 0.0;           // full width at half the dip depth
  double modulation_depth = 0.0;  // 1 - P_min / P_background
};

enum class StateLabel {
  extinguished,
  cw,
  single_dark,
  multiple_dark,
  unstable,
  not_converged,
};

std::string to_string(StateLabel label);

struct StateClassification {
  StateLabel label = StateLabel::not_converged;
  std::vector<DarkPulse> pulses;
  double cw_level_w = 0.0;
  double spectral_bw_3db_nm = 0.0;
  bool bandwidth_grid_limited = false;
  double tbp = 0.0;  // 0 when not applicable
};

/// Dip-insensitive CW level: median of the upper quartile of the samples.
double estimate_background(const std::vector<double>& power_w);

std::vector<double> power_profile(const VectorField& f);

/// Local minima of |u|^2+|v|^2 whose relative depth exceeds the threshold,
/// measured against the robust background; FWHM at half depth with linear
/// interpolation between samples; periodic wrap respected.
std::vector<DarkPulse> find_dark_pulses(const VectorField& f,
                                        double depth_threshold);

struct Bandwidth {
  double nm = 0.0;
  bool grid_limited = false;
};

/// Width of the total power spectrum at half its peak, in nm at lambda0.
Bandwidth spectral_bandwidth_3db(const VectorField& f, double lambda0_nm);

/// fwhm * (c * bw / lambda0^2), dimensionless.
double time_bandwidth_product(double fwhm_ps, double bw_nm, double lambda0_nm);

}  // namespace darkring
