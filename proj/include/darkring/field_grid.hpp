#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace darkring {

/// Uniform periodic temporal sampling window together with the conjugate
/// angular-frequency axis in standard DFT ordering.
struct TimeGrid {
  std::size_t n_samples = 0;   // power of two
  double window_ps = 0.0;      // full temporal span
  double dt_ps = 0.0;          // window_ps / n_samples
  std::vector<double> omega;   // rad/ps, DFT order: 0, +, ..., -Nyq, ..., -

  // Sample time, centered: t = (i - n/2) * dt.
  double time(std::size_t i) const {
    return (static_cast<double>(i) -
            static_cast<double>(n_samples) / 2.0) * dt_ps;
  }
};

TimeGrid make_grid(std::size_t n_samples, double window_ps);

/// Two-polarization complex field envelope on a TimeGrid. Amplitudes in
/// sqrt(W), so |u|^2 is an instantaneous power in W.
struct VectorField {
  TimeGrid grid;
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> v;
};

VectorField make_zero_field(const TimeGrid& grid);

bool all_finite(const VectorField& f);

/// Sum of (|u|^2 + |v|^2) * dt in pJ (W * ps).
double total_energy(const VectorField& f);

/// Power spectral densities per component, DFT frequency ordering,
/// normalized so that sum(S_k) * domega / (2*pi) equals the time-domain
/// energy (Parseval-consistent).
struct Spectrum {
  std::vector<double> su;
  std::vector<double> sv;
};

Spectrum spectrum(const VectorField& f);

/// CW background with a central sech-shaped intensity dip plus seeded
/// complex white noise on both components. dip_depth in [0, 1]; depth 1
/// takes the amplitude to zero at t = 0. The dip carries no phase step,
/// keeping the periodic window phase consistent.
VectorField init_cw_with_dip(const TimeGrid& grid, double cw_power_w,
                             double dip_depth, double dip_width_ps,
                             double noise_amplitude, std::uint64_t seed);

}  // namespace darkring
