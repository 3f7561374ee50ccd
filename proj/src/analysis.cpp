#include "darkring/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "darkring/constants.hpp"

namespace darkring {

std::string to_string(StateLabel label) {
  switch (label) {
    case StateLabel::extinguished: return "extinguished";
    case StateLabel::cw: return "cw";
    case StateLabel::single_dark: return "single_dark";
    case StateLabel::multiple_dark: return "multiple_dark";
    case StateLabel::unstable: return "unstable";
    case StateLabel::not_converged: return "not_converged";
  }
  return "unknown";
}

std::vector<double> power_profile(const VectorField& f) {
  std::vector<double> p(f.grid.n_samples);
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::norm(f.u[i]) + std::norm(f.v[i]);
  return p;
}

double estimate_background(const std::vector<double>& power_w) {
  if (power_w.empty())
    throw std::invalid_argument("estimate_background: empty profile");
  std::vector<double> sorted = power_w;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t quartile = std::max<std::size_t>(1, sorted.size() / 4);
  // Median of the largest-quartile samples.
  return sorted[quartile / 2];
}

namespace {

// Max of p over the forward arc from i to j (exclusive endpoints).
double arc_max(const std::vector<double>& p, std::size_t i, std::size_t j) {
  const std::size_t n = p.size();
  double m = -1.0;
  for (std::size_t k = (i + 1) % n; k != j; k = (k + 1) % n)
    m = std::max(m, p[k]);
  return m;
}

// Linear interpolation of the crossing of level between samples a and b.
double cross_frac(double pa, double pb, double level) {
  const double d = pb - pa;
  return (d == 0.0) ? 0.5 : (level - pa) / d;
}

}  // namespace

std::vector<DarkPulse> find_dark_pulses(const VectorField& f,
                                        double depth_threshold) {
  if (!(depth_threshold > 0.0 && depth_threshold < 1.0))
    throw std::invalid_argument("find_dark_pulses: threshold must be in (0,1)");
  const std::vector<double> p = power_profile(f);
  const std::size_t n = p.size();
  const double bg = estimate_background(p);
  if (bg <= 0.0) return {};
  const double accept_level = bg * (1.0 - depth_threshold);

  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = p[(i + n - 1) % n];
    const double next = p[(i + 1) % n];
    if (p[i] < prev && p[i] <= next && p[i] < accept_level) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(),
            [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  // Noisy transients can throw up very many shallow minima; only the
  // deepest few can survive the barrier test anyway.
  constexpr std::size_t kMaxCandidates = 64;
  if (minima.size() > kMaxCandidates) minima.resize(kMaxCandidates);

  // Keep a minimum only if it is separated from every deeper accepted one
  // by a barrier that recovers above its own half-depth level.
  std::vector<std::size_t> accepted;
  for (std::size_t i : minima) {
    const double half_level = 0.5 * (bg + p[i]);
    bool distinct = true;
    for (std::size_t j : accepted) {
      const double barrier =
          std::min(arc_max(p, i, j), arc_max(p, j, i));
      if (barrier < half_level) {
        distinct = false;
        break;
      }
    }
    if (distinct) accepted.push_back(i);
  }

  std::vector<DarkPulse> pulses;
  const double dt = f.grid.dt_ps;
  for (std::size_t i : accepted) {
    DarkPulse dp;
    dp.modulation_depth = 1.0 - p[i] / bg;
    // Sub-sample minimum position from a parabolic fit.
    const double pm = p[(i + n - 1) % n], p0 = p[i], pp = p[(i + 1) % n];
    const double denom = pm - 2.0 * p0 + pp;
    const double shift = (denom > 0.0) ? 0.5 * (pm - pp) / denom : 0.0;
    dp.position_ps = f.grid.time(i) + shift * dt;

    const double half_level = 0.5 * (bg + p[i]);
    // Walk outward to the half-depth crossings, periodic indices.
    double left = 0.0, right = 0.0;
    std::size_t k = i;
    for (std::size_t steps = 0; steps < n; ++steps) {
      const std::size_t nk = (k + 1) % n;
      if (p[nk] >= half_level) {
        right = static_cast<double>(steps) + cross_frac(p[k], p[nk], half_level);
        break;
      }
      k = nk;
      if (steps + 1 == n) right = static_cast<double>(n) / 2.0;
    }
    k = i;
    for (std::size_t steps = 0; steps < n; ++steps) {
      const std::size_t nk = (k + n - 1) % n;
      if (p[nk] >= half_level) {
        left = static_cast<double>(steps) + cross_frac(p[k], p[nk], half_level);
        break;
      }
      k = nk;
      if (steps + 1 == n) left = static_cast<double>(n) / 2.0;
    }
    dp.fwhm_ps = (left + right) * dt;
    pulses.push_back(dp);
  }
  std::sort(pulses.begin(), pulses.end(),
            [](const DarkPulse& a, const DarkPulse& b) {
              return a.position_ps < b.position_ps;
            });
  return pulses;
}

Bandwidth spectral_bandwidth_3db(const VectorField& f, double lambda0_nm) {
  const Spectrum s = spectrum(f);
  const std::size_t n = f.grid.n_samples;
  const std::size_t half = n / 2;
  // Reorder to monotone frequency.
  std::vector<double> pw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = (i + half) % n;  // -Nyq ... 0 ... +max
    pw[i] = s.su[src] + s.sv[src];
  }
  const double dw = 2.0 * kPi / f.grid.window_ps;

  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(pw.begin(), pw.end()) - pw.begin());
  const double level = pw[peak] / 2.0;
  if (pw[peak] <= 0.0) return {0.0, true};

  double hi = static_cast<double>(n - 1 - peak);
  for (std::size_t i = peak; i + 1 < n; ++i) {
    if (pw[i + 1] < level) {
      hi = static_cast<double>(i - peak) + cross_frac(pw[i], pw[i + 1], level);
      break;
    }
  }
  double lo = static_cast<double>(peak);
  for (std::size_t i = peak; i > 0; --i) {
    if (pw[i - 1] < level) {
      lo = static_cast<double>(peak - i) + cross_frac(pw[i], pw[i - 1], level);
      break;
    }
  }
  const double width_rad = (hi + lo) * dw;
  Bandwidth bw;
  bw.nm = width_rad * lambda0_nm * lambda0_nm /
          (2.0 * kPi * kSpeedOfLightNmPerPs);
  bw.grid_limited = width_rad <= 1.5 * dw;
  return bw;
}

double time_bandwidth_product(double fwhm_ps, double bw_nm, double lambda0_nm) {
  if (!(fwhm_ps > 0.0 && bw_nm > 0.0 && lambda0_nm > 0.0))
    throw std::invalid_argument("time_bandwidth_product: inputs must be positive");
  const double dnu = kSpeedOfLightNmPerPs * bw_nm / (lambda0_nm * lambda0_nm);
  return fwhm_ps * dnu;  // THz * ps
}

}  // namespace darkring
