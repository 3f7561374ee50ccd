#include "darkring/cavity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "darkring/analysis.hpp"
#include "darkring/fiber.hpp"

namespace darkring {

double CavityConfig::total_length_m() const {
  double l = 0.0;
  for (const auto& s : segments) l += s.length_km;
  return l * 1e3;
}

double net_dispersion(const CavityConfig& cfg) {
  const double total_m = cfg.total_length_m();
  double d = 0.0;
  for (const auto& s : cfg.segments)
    d += derive_coefficients(s, cfg.lambda0_nm, total_m).beta2 * s.length_km;
  return d;
}

void apply_polarizer(VectorField& f, double phi_rad) {
  const double c = std::cos(phi_rad);
  const double s = std::sin(phi_rad);
  for (std::size_t i = 0; i < f.grid.n_samples; ++i) {
    const std::complex<double> a = f.u[i] * c + f.v[i] * s;
    f.u[i] = a * c;
    f.v[i] = a * s;
  }
}

void apply_phase_bias(VectorField& f, double delta_phi_rad) {
  const std::complex<double> rot = std::polar(1.0, delta_phi_rad);
  for (auto& x : f.v) x *= rot;
}

VectorField apply_coupler(VectorField& f, double out_fraction) {
  if (!(out_fraction > 0.0 && out_fraction < 1.0))
    throw std::invalid_argument("apply_coupler: out_fraction must be in (0,1)");
  VectorField emitted = f;
  const double keep = std::sqrt(1.0 - out_fraction);
  const double out = std::sqrt(out_fraction);
  for (std::size_t i = 0; i < f.grid.n_samples; ++i) {
    emitted.u[i] *= out;
    emitted.v[i] *= out;
    f.u[i] *= keep;
    f.v[i] *= keep;
  }
  return emitted;
}

Cavity::Cavity(CavityConfig cfg) : cfg_(std::move(cfg)) {
  if (!(cfg_.coupler_out > 0.0 && cfg_.coupler_out < 1.0))
    throw std::invalid_argument("Cavity: coupler_out must be in (0,1)");
  const double total_m = cfg_.total_length_m();
  coeffs_.reserve(cfg_.segments.size());
  for (const auto& s : cfg_.segments)
    coeffs_.push_back(derive_coefficients(s, cfg_.lambda0_nm, total_m));
}

VectorField Cavity::round_trip(VectorField& f) const {
  apply_polarizer(f, cfg_.polarizer_angle_rad);
  apply_phase_bias(f, cfg_.phase_bias_rad);
  for (std::size_t i = 0; i < cfg_.segments.size(); ++i)
    propagate_segment(f, cfg_.segments[i], coeffs_[i], cfg_.step);
  return apply_coupler(f, cfg_.coupler_out);
}

RunResult Cavity::run_to_steady_state(VectorField f0,
                                      double pulse_depth_threshold,
                                      const TripObserver& on_trip) const {
  RunResult res;
  res.field = std::move(f0);
  const std::size_t n = res.field.grid.n_samples;

  std::mt19937_64 trip_rng(cfg_.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> prev_amp(2 * n, 0.0), cur_amp(2 * n, 0.0);
  auto fill_amp = [&](const VectorField& f, std::vector<double>& a) {
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::abs(f.u[i]);
      a[n + i] = std::abs(f.v[i]);
    }
  };
  fill_amp(res.field, prev_amp);

  std::size_t quiet = 0;
  constexpr double kExtinctEnergyPj = 1e-9;
  for (std::size_t trip = 1; trip <= cfg_.max_round_trips; ++trip) {
    if (cfg_.trip_noise_amplitude > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        res.field.u[i] += cfg_.trip_noise_amplitude *
                          std::complex<double>(gauss(trip_rng), gauss(trip_rng));
        res.field.v[i] += cfg_.trip_noise_amplitude *
                          std::complex<double>(gauss(trip_rng), gauss(trip_rng));
      }
    }
    res.emitted = round_trip(res.field);
    res.trips_run = trip;
    if (on_trip) on_trip(trip, res.field);

    fill_amp(res.field, cur_amp);
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const double d = cur_amp[i] - prev_amp[i];
      diff2 += d * d;
      norm2 += cur_amp[i] * cur_amp[i];
    }
    const double residual =
        (norm2 > 0.0) ? std::sqrt(diff2 / norm2) : 0.0;
    std::swap(prev_amp, cur_amp);

    const double energy = total_energy(res.field);
    const std::vector<double> p = power_profile(res.field);
    TraceEntry e;
    e.trip = trip;
    e.energy_pj = energy;
    e.cw_level_w = estimate_background(p);
    e.residual = residual;
    res.trace.entries.push_back(e);

    // Rolling window of dip positions for the stability classifier.
    PulseSnapshot snap;
    snap.trip = trip;
    if (energy > kExtinctEnergyPj) {
      for (const auto& dp : find_dark_pulses(res.field, pulse_depth_threshold))
        snap.positions_ps.push_back(dp.position_ps);
    }
    res.recent_pulses.push_back(std::move(snap));
    if (res.recent_pulses.size() > cfg_.convergence_window)
      res.recent_pulses.erase(res.recent_pulses.begin());

    if (energy <= kExtinctEnergyPj) {
      res.status = RunStatus::extinguished;
      return res;
    }
    quiet = (residual < cfg_.convergence_tol) ? quiet + 1 : 0;
    if (quiet >= cfg_.convergence_window) {
      res.status = RunStatus::converged;
      return res;
    }
  }
  res.status = RunStatus::not_converged;
  return res;
}

}  // namespace darkring
