#pragma once

#include <string>

#include "darkring/field_grid.hpp"

namespace darkring {

/// Physical parameters of one fiber piece, in the engineer's units used
/// for fiber data sheets.
struct FiberSegment {
  std::string name;
  double length_km = 0.0;
  double dispersion_D = 0.0;       // (ps/nm)/km
  double third_order_D = 0.0;      // (ps^2/nm)/km
  double gamma = 0.0;              // 1/(W km)
  double small_signal_gain = 0.0;  // 1/km, 0 for passive fiber
  double sat_energy_pj = 0.0;      // gain saturation energy
  double gain_bandwidth_nm = 0.0;  // spectral filter width of the gain
  double beat_length_ratio = 0.0;  // cavity L / L_b, dimensionless
};

struct StepControl {
  double step_size_km = 1e-4;  // symmetric split-step size
};

/// Propagation-equation coefficients in ps/km units, derived from the
/// segment's data-sheet parameters at the operating wavelength.
struct DerivedCoefficients {
  double beta2 = 0.0;     // ps^2/km, > 0 means normal dispersion
  double beta3 = 0.0;     // ps^3/km
  double beta_bi = 0.0;   // rad/km, linear birefringence phase
  double delta = 0.0;     // ps/km, polarization group-velocity mismatch
  double omega_g = 0.0;   // rad/ps, gain filter half-width (0 = no filter)
};

DerivedCoefficients derive_coefficients(const FiberSegment& seg,
                                        double lambda0_nm,
                                        double total_cavity_length_m);

/// Frequency-domain half of the split step: dispersion, birefringence,
/// gain and the parabolic gain-bandwidth filter over a length h.
/// Exactly unitary when g == 0.
void linear_step(VectorField& f, const DerivedCoefficients& c, double g_per_km,
                 double h_km);

/// Time-domain half: SPM, XPM and the coherent polarization coupling term,
/// integrated per sample over h. Conserves pointwise |u|^2 + |v|^2.
void nonlinear_step(VectorField& f, double gamma, double h_km);

/// Saturated gain at segment entry: g0 * exp(-E/E_sat).
double saturated_gain(const FiberSegment& seg, const VectorField& f_in);

/// Symmetric split-step march through one segment. The gain coefficient is
/// frozen at its segment-entry saturated value. Throws on NaN, naming the
/// z-position where it appeared.
void propagate_segment(VectorField& f, const FiberSegment& seg,
                       const DerivedCoefficients& coeff,
                       const StepControl& ctl);

}  // namespace darkring
