#include "darkring/field_grid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "darkring/constants.hpp"
#include "darkring/fft.hpp"

namespace darkring {

TimeGrid make_grid(std::size_t n_samples, double window_ps) {
  if (n_samples < 2 || (n_samples & (n_samples - 1)) != 0)
    throw std::invalid_argument("make_grid: n_samples must be a power of two >= 2");
  if (!(window_ps > 0.0))
    throw std::invalid_argument("make_grid: window must be positive");
  TimeGrid g;
  g.n_samples = n_samples;
  g.window_ps = window_ps;
  g.dt_ps = window_ps / static_cast<double>(n_samples);
  g.omega.resize(n_samples);
  const double dw = 2.0 * kPi / window_ps;
  const std::size_t half = n_samples / 2;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto k = (i < half) ? static_cast<long long>(i)
                              : static_cast<long long>(i) -
                                    static_cast<long long>(n_samples);
    g.omega[i] = dw * static_cast<double>(k);
  }
  return g;
}

VectorField make_zero_field(const TimeGrid& grid) {
  VectorField f;
  f.grid = grid;
  f.u.assign(grid.n_samples, {0.0, 0.0});
  f.v.assign(grid.n_samples, {0.0, 0.0});
  return f;
}

bool all_finite(const VectorField& f) {
  auto ok = [](const std::vector<std::complex<double>>& a) {
    for (const auto& x : a)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  };
  return ok(f.u) && ok(f.v);
}

double total_energy(const VectorField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.u.size(); ++i)
    s += std::norm(f.u[i]) + std::norm(f.v[i]);
  return s * f.grid.dt_ps;
}

Spectrum spectrum(const VectorField& f) {
  const std::size_t n = f.grid.n_samples;
  std::vector<std::complex<double>> fu = f.u, fv = f.v;
  fft::forward(fu);
  fft::forward(fv);
  Spectrum s;
  s.su.resize(n);
  s.sv.resize(n);
  const double scale = f.grid.dt_ps * f.grid.dt_ps;
  for (std::size_t i = 0; i < n; ++i) {
    s.su[i] = std::norm(fu[i]) * scale;
    s.sv[i] = std::norm(fv[i]) * scale;
  }
  return s;
}

VectorField init_cw_with_dip(const TimeGrid& grid, double cw_power_w,
                             double dip_depth, double dip_width_ps,
                             double noise_amplitude, std::uint64_t seed) {
  if (dip_depth < 0.0 || dip_depth > 1.0)
    throw std::invalid_argument("init_cw_with_dip: dip_depth outside [0,1]");
  if (!(dip_width_ps > 0.0))
    throw std::invalid_argument("init_cw_with_dip: dip_width must be positive");
  if (cw_power_w < 0.0)
    throw std::invalid_argument("init_cw_with_dip: cw_power must be >= 0");

  VectorField f = make_zero_field(grid);
  const double a0 = std::sqrt(cw_power_w);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < grid.n_samples; ++i) {
    const double t = grid.time(i);
    const double profile = a0 * (1.0 - dip_depth / std::cosh(t / dip_width_ps));
    const std::complex<double> nu(gauss(rng), gauss(rng));
    const std::complex<double> nv(gauss(rng), gauss(rng));
    f.u[i] = profile * (1.0 + noise_amplitude * nu);
    f.v[i] = profile * (1.0 + noise_amplitude * nv);
  }
  return f;
}

}  // namespace darkring
