#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "darkring/fiber.hpp"
#include "darkring/field_grid.hpp"

namespace darkring {

/// Ring cavity: ordered fiber segments plus the lumped elements, the
/// numeric grid and the round-trip iteration settings.
struct CavityConfig {
  std::vector<FiberSegment> segments;
  double polarizer_angle_rad = 0.0;  // axis of the polarization-dependent isolator
  double phase_bias_rad = 0.0;       // linear phase delay between u and v (PC)
  double coupler_out = 0.5;          // output coupling fraction
  double lambda0_nm = 1565.0;

  std::size_t grid_samples = 8192;
  double window_ps = 200.0;
  StepControl step;

  std::size_t max_round_trips = 2000;
  double convergence_tol = 1e-6;
  std::size_t convergence_window = 50;  // consecutive sub-tolerance trips

  // Initial condition.
  double init_cw_power_w = 0.1;
  double init_dip_depth = 0.5;
  double init_dip_width_ps = 2.0;
  double init_noise_amplitude = 1e-3;
  std::uint64_t seed = 1;

  // Optional per-trip noise injection (0 disables it; deterministic runs).
  double trip_noise_amplitude = 0.0;

  double total_length_m() const;
};

/// Sum over segments of beta2 * length at the cavity wavelength, in ps^2.
double net_dispersion(const CavityConfig& cfg);

/// Project both components onto the unit axis (cos phi, sin phi).
void apply_polarizer(VectorField& f, double phi_rad);

/// v <- v * exp(i * delta_phi); u untouched.
void apply_phase_bias(VectorField& f, double delta_phi_rad);

/// Amplitude split; returns the emitted field, leaves the kept field in f.
VectorField apply_coupler(VectorField& f, double out_fraction);

struct TraceEntry {
  std::size_t trip = 0;
  double energy_pj = 0.0;
  double cw_level_w = 0.0;
  double residual = 0.0;
};

struct RoundTripTrace {
  std::vector<TraceEntry> entries;
};

enum class RunStatus { converged, not_converged, extinguished };

/// Per-trip dark-dip summary kept over the final trips for the stability
/// check in the classifier.
struct PulseSnapshot {
  std::size_t trip = 0;
  std::vector<double> positions_ps;  // sorted
};

struct RunResult {
  VectorField field;
  VectorField emitted;
  RoundTripTrace trace;
  RunStatus status = RunStatus::not_converged;
  std::size_t trips_run = 0;
  std::vector<PulseSnapshot> recent_pulses;  // last convergence_window trips
};

/// Precomputed per-segment coefficients for a config.
class Cavity {
 public:
  explicit Cavity(CavityConfig cfg);

  const CavityConfig& config() const { return cfg_; }
  const std::vector<DerivedCoefficients>& coefficients() const { return coeffs_; }

  /// One pass: polarizer -> phase bias -> segments in order -> coupler.
  /// Returns the emitted field; f becomes the intracavity field.
  VectorField round_trip(VectorField& f) const;

  using TripObserver =
      std::function<void(std::size_t trip, const VectorField& intracavity)>;

  /// Iterate round trips until the amplitude-profile residual stays below
  /// tolerance for convergence_window consecutive trips, or the cap hits.
  RunResult run_to_steady_state(VectorField f0,
                                double pulse_depth_threshold = 0.2,
                                const TripObserver& on_trip = {}) const;

 private:
  CavityConfig cfg_;
  std::vector<DerivedCoefficients> coeffs_;
};

}  // namespace darkring
