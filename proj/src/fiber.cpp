#include "darkring/fiber.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "darkring/constants.hpp"
#include "darkring/fft.hpp"

namespace darkring {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// Right-hand side of the coupled SPM/XPM/coherent-coupling system.
inline void nonlinear_rhs(const cplx& u, const cplx& v, double gamma,
                          cplx& du, cplx& dv) {
  const double pu = std::norm(u);
  const double pv = std::norm(v);
  du = kI * gamma * ((pu + (2.0 / 3.0) * pv) * u +
                     (1.0 / 3.0) * v * v * std::conj(u));
  dv = kI * gamma * ((pv + (2.0 / 3.0) * pu) * v +
                     (1.0 / 3.0) * u * u * std::conj(v));
}

}  // namespace

DerivedCoefficients derive_coefficients(const FiberSegment& seg,
                                        double lambda0_nm,
                                        double total_cavity_length_m) {
  if (!(lambda0_nm > 0.0))
    throw std::invalid_argument("derive_coefficients: lambda0 must be positive");
  const double conv = lambda0_nm * lambda0_nm /
                      (2.0 * kPi * kSpeedOfLightNmPerPs);  // ps * nm
  DerivedCoefficients c;
  c.beta2 = -seg.dispersion_D * conv;
  c.beta3 = seg.third_order_D * conv;
  if (seg.beat_length_ratio > 0.0 && total_cavity_length_m > 0.0) {
    const double beat_length_km =
        total_cavity_length_m * 1e-3 / seg.beat_length_ratio;
    c.beta_bi = kPi / beat_length_km;
    c.delta = c.beta_bi * lambda0_nm / (2.0 * kPi * kSpeedOfLightNmPerPs);
  }
  if (seg.gain_bandwidth_nm > 0.0) {
    c.omega_g = 2.0 * kPi * kSpeedOfLightNmPerPs /
                (lambda0_nm * lambda0_nm) * seg.gain_bandwidth_nm;
  }
  return c;
}

void linear_step(VectorField& f, const DerivedCoefficients& c, double g_per_km,
                 double h_km) {
  if (!(h_km > 0.0))
    throw std::invalid_argument("linear_step: h must be positive");
  fft::forward(f.u);
  fft::forward(f.v);
  const double filter = (c.omega_g > 0.0 && g_per_km != 0.0)
                            ? g_per_km / (2.0 * c.omega_g * c.omega_g)
                            : 0.0;
  for (std::size_t i = 0; i < f.grid.n_samples; ++i) {
    const double w = f.grid.omega[i];
    const double w2 = w * w;
    const double phase_common = c.beta2 / 2.0 * w2 + c.beta3 / 6.0 * w2 * w;
    const double amp = std::exp(h_km * (g_per_km / 2.0 - filter * w2));
    const cplx mu = amp * std::exp(kI * (h_km * (c.beta_bi + c.delta * w +
                                                 phase_common)));
    const cplx mv = amp * std::exp(kI * (h_km * (-c.beta_bi - c.delta * w +
                                                 phase_common)));
    f.u[i] *= mu;
    f.v[i] *= mv;
  }
  fft::inverse(f.u);
  fft::inverse(f.v);
}

void nonlinear_step(VectorField& f, double gamma, double h_km) {
  if (!(h_km > 0.0))
    throw std::invalid_argument("nonlinear_step: h must be positive");
  if (gamma == 0.0) return;
  constexpr int kSubSteps = 4;
  const double hs = h_km / kSubSteps;
  for (std::size_t i = 0; i < f.grid.n_samples; ++i) {
    cplx u = f.u[i];
    cplx v = f.v[i];
    if (u == 0.0 && v == 0.0) continue;
    if (v == 0.0) {
      // Coherent coupling vanishes; pure SPM has the exact solution.
      f.u[i] = u * std::exp(kI * (gamma * std::norm(u) * h_km));
      continue;
    }
    if (u == 0.0) {
      f.v[i] = v * std::exp(kI * (gamma * std::norm(v) * h_km));
      continue;
    }
    for (int s = 0; s < kSubSteps; ++s) {
      cplx k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      nonlinear_rhs(u, v, gamma, k1u, k1v);
      nonlinear_rhs(u + 0.5 * hs * k1u, v + 0.5 * hs * k1v, gamma, k2u, k2v);
      nonlinear_rhs(u + 0.5 * hs * k2u, v + 0.5 * hs * k2v, gamma, k3u, k3v);
      nonlinear_rhs(u + hs * k3u, v + hs * k3v, gamma, k4u, k4v);
      u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    f.u[i] = u;
    f.v[i] = v;
  }
}

double saturated_gain(const FiberSegment& seg, const VectorField& f_in) {
  // Negative small_signal_gain models unsaturable distributed loss.
  if (seg.small_signal_gain <= 0.0) return seg.small_signal_gain;
  if (!(seg.sat_energy_pj > 0.0))
    throw std::invalid_argument("saturated_gain: sat_energy must be positive");
  return seg.small_signal_gain * std::exp(-total_energy(f_in) / seg.sat_energy_pj);
}

void propagate_segment(VectorField& f, const FiberSegment& seg,
                       const DerivedCoefficients& coeff,
                       const StepControl& ctl) {
  if (seg.length_km <= 0.0) return;
  if (!(ctl.step_size_km > 0.0))
    throw std::invalid_argument("propagate_segment: step size must be positive");
  const auto n_steps = static_cast<std::size_t>(
      std::max(1.0, std::round(seg.length_km / ctl.step_size_km)));
  const double h = seg.length_km / static_cast<double>(n_steps);
  const double g = saturated_gain(seg, f);

  // Symmetric split step with adjacent linear half steps merged; the
  // linear operator is diagonal in frequency so the composition is exact.
  linear_step(f, coeff, g, h / 2.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    nonlinear_step(f, seg.gamma, h);
    linear_step(f, coeff, g, (k + 1 < n_steps) ? h : h / 2.0);
    if (!all_finite(f)) {
      const double z = h * static_cast<double>(k + 1);
      throw std::runtime_error("propagate_segment: non-finite field in segment '" +
                               seg.name + "' at z = " + std::to_string(z) + " km");
    }
  }
}

}  // namespace darkring
