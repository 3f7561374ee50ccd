#include <doctest.h>

#include <cmath>
#include <complex>

#include "darkring/cavity.hpp"
#include "darkring/config.hpp"
#include "darkring/constants.hpp"

using namespace darkring;
using cplx = std::complex<double>;

namespace {

CavityConfig small_grid_config() {
  CavityConfig cfg = default_cavity_config();
  cfg.grid_samples = 256;
  cfg.window_ps = 200.0;
  cfg.step.step_size_km = 5e-4;
  return cfg;
}

CavityConfig with_smf_length(CavityConfig cfg, double meters) {
  for (auto& s : cfg.segments)
    if (s.name == "SMF") s.length_km = meters * 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("net dispersion endpoints of the dispersion-managed cavity") {
  CavityConfig cfg = default_cavity_config();
  CHECK(net_dispersion(with_smf_length(cfg, 0.0)) ==
        doctest::Approx(0.2215).epsilon(0.005));
  CHECK(net_dispersion(with_smf_length(cfg, 10.0)) ==
        doctest::Approx(-0.0125).epsilon(0.005));
  CHECK(net_dispersion(with_smf_length(cfg, 8.0)) ==
        doctest::Approx(0.0343).epsilon(0.005));
}

TEST_CASE("net dispersion is linear in segment length") {
  CavityConfig cfg = default_cavity_config();
  const double d0 = net_dispersion(with_smf_length(cfg, 0.0));
  const double d4 = net_dispersion(with_smf_length(cfg, 4.0));
  const double d8 = net_dispersion(with_smf_length(cfg, 8.0));
  CHECK(d8 - d4 == doctest::Approx(d4 - d0).epsilon(1e-12));
}

TEST_CASE("apply_polarizer projects onto the polarizer axis") {
  TimeGrid g = make_grid(64, 10.0);
  VectorField f = init_cw_with_dip(g, 1.0, 0.3, 1.0, 1e-2, 11);

  SUBCASE("phi = 0 keeps u and zeroes v") {
    VectorField a = f;
    apply_polarizer(a, 0.0);
    for (std::size_t i = 0; i < g.n_samples; ++i) {
      CHECK(a.u[i] == f.u[i]);
      CHECK(std::abs(a.v[i]) == 0.0);
    }
  }
  SUBCASE("a field along the axis is unchanged") {
    const double phi = 0.13 * kPi;
    VectorField a = make_zero_field(g);
    for (std::size_t i = 0; i < g.n_samples; ++i) {
      a.u[i] = f.u[i] * std::cos(phi);
      a.v[i] = f.u[i] * std::sin(phi);
    }
    VectorField b = a;
    apply_polarizer(b, phi);
    for (std::size_t i = 0; i < g.n_samples; ++i) {
      CHECK(std::abs(b.u[i] - a.u[i]) <= 1e-15);
      CHECK(std::abs(b.v[i] - a.v[i]) <= 1e-15);
    }
  }
  SUBCASE("projector: applying twice equals applying once") {
    const double phi = 0.37;
    VectorField once = f, twice = f;
    apply_polarizer(once, phi);
    apply_polarizer(twice, phi);
    apply_polarizer(twice, phi);
    for (std::size_t i = 0; i < g.n_samples; ++i) {
      CHECK(std::abs(twice.u[i] - once.u[i]) <= 1e-15);
      CHECK(std::abs(twice.v[i] - once.v[i]) <= 1e-15);
    }
  }
  SUBCASE("energy never increases") {
    VectorField a = f;
    apply_polarizer(a, 1.1);
    CHECK(total_energy(a) <= total_energy(f) + 1e-12);
  }
}

TEST_CASE("apply_phase_bias is a pure phase on v") {
  TimeGrid g = make_grid(64, 10.0);
  VectorField f = init_cw_with_dip(g, 1.0, 0.5, 1.0, 1e-2, 12);

  SUBCASE("zero bias is the identity") {
    VectorField a = f;
    apply_phase_bias(a, 0.0);
    for (std::size_t i = 0; i < g.n_samples; ++i) CHECK(a.v[i] == f.v[i]);
  }
  SUBCASE("2 pi bias is the identity to machine precision") {
    VectorField a = f;
    apply_phase_bias(a, 2.0 * kPi);
    for (std::size_t i = 0; i < g.n_samples; ++i)
      CHECK(std::abs(a.v[i] - f.v[i]) <= 1e-14 * (1.0 + std::abs(f.v[i])));
  }
  SUBCASE("|v| and u are untouched for any bias") {
    VectorField a = f;
    apply_phase_bias(a, 1.6 * kPi);
    for (std::size_t i = 0; i < g.n_samples; ++i) {
      CHECK(a.u[i] == f.u[i]);
      CHECK(std::abs(a.v[i]) == doctest::Approx(std::abs(f.v[i])).epsilon(1e-14));
    }
    CHECK(total_energy(a) == doctest::Approx(total_energy(f)).epsilon(1e-12));
  }
}

TEST_CASE("apply_coupler splits energy exactly") {
  TimeGrid g = make_grid(128, 20.0);
  VectorField f = init_cw_with_dip(g, 2.0, 0.4, 1.0, 1e-2, 13);
  const double e0 = total_energy(f);

  SUBCASE("50% coupler halves the energy") {
    VectorField kept = f;
    VectorField emitted = apply_coupler(kept, 0.5);
    CHECK(total_energy(kept) == doctest::Approx(e0 / 2.0).epsilon(1e-12));
    CHECK(total_energy(emitted) == doctest::Approx(e0 / 2.0).epsilon(1e-12));
  }
  SUBCASE("partition sums to the input for any fraction") {
    VectorField kept = f;
    VectorField emitted = apply_coupler(kept, 0.23);
    CHECK(total_energy(kept) + total_energy(emitted) ==
          doctest::Approx(e0).epsilon(1e-12));
  }
  SUBCASE("small out fraction keeps nearly everything") {
    VectorField kept = f;
    apply_coupler(kept, 1e-9);
    CHECK(total_energy(kept) == doctest::Approx(e0).epsilon(1e-8));
  }
  SUBCASE("invalid fractions rejected") {
    VectorField kept = f;
    CHECK_THROWS(apply_coupler(kept, 0.0));
    CHECK_THROWS(apply_coupler(kept, 1.0));
    CHECK_THROWS(apply_coupler(kept, 1.5));
  }
}

TEST_CASE("round_trip maps zero to zero") {
  CavityConfig cfg = small_grid_config();
  Cavity cav(cfg);
  VectorField f = make_zero_field(make_grid(cfg.grid_samples, cfg.window_ps));
  cav.round_trip(f);
  CHECK(total_energy(f) == 0.0);
}

TEST_CASE("passive cavity strictly loses energy per round trip") {
  CavityConfig cfg = small_grid_config();
  for (auto& s : cfg.segments) s.small_signal_gain = 0.0;
  Cavity cav(cfg);
  VectorField f = init_cw_with_dip(make_grid(cfg.grid_samples, cfg.window_ps),
                                   1.0, 0.3, 2.0, 1e-3, 21);
  double e = total_energy(f);
  for (int k = 0; k < 5; ++k) {
    cav.round_trip(f);
    const double e_next = total_energy(f);
    CHECK(e_next < e);
    e = e_next;
  }
}

TEST_CASE("round_trip is deterministic") {
  CavityConfig cfg = small_grid_config();
  Cavity cav(cfg);
  TimeGrid g = make_grid(cfg.grid_samples, cfg.window_ps);
  VectorField a = init_cw_with_dip(g, 0.1, 0.5, 2.0, 1e-3, 31);
  VectorField b = a;
  VectorField ea = cav.round_trip(a);
  VectorField eb = cav.round_trip(b);
  for (std::size_t i = 0; i < g.n_samples; ++i) {
    CHECK(a.u[i] == b.u[i]);
    CHECK(a.v[i] == b.v[i]);
    CHECK(ea.u[i] == eb.u[i]);
    CHECK(ea.v[i] == eb.v[i]);
  }
}

TEST_CASE("round-trip element energy accounting") {
  // Reconstruct the trip element by element: the coupler partition must be
  // exact relative to the field just before it.
  CavityConfig cfg = small_grid_config();
  Cavity cav(cfg);
  TimeGrid g = make_grid(cfg.grid_samples, cfg.window_ps);
  VectorField f = init_cw_with_dip(g, 0.1, 0.5, 2.0, 1e-3, 41);

  VectorField manual = f;
  apply_polarizer(manual, cfg.polarizer_angle_rad);
  apply_phase_bias(manual, cfg.phase_bias_rad);
  for (std::size_t i = 0; i < cfg.segments.size(); ++i)
    propagate_segment(manual, cfg.segments[i], cav.coefficients()[i], cfg.step);
  const double e_before_coupler = total_energy(manual);
  VectorField kept = manual;
  VectorField emitted = apply_coupler(kept, cfg.coupler_out);
  CHECK(total_energy(kept) + total_energy(emitted) ==
        doctest::Approx(e_before_coupler).epsilon(1e-9));

  // And the composed round trip gives the same kept field.
  VectorField composed = f;
  VectorField emitted2 = cav.round_trip(composed);
  for (std::size_t i = 0; i < g.n_samples; ++i) {
    CHECK(composed.u[i] == kept.u[i]);
    CHECK(emitted2.u[i] == emitted.u[i]);
  }
}

namespace {

// Independent CW oracle: the same split-step schedule collapsed onto a
// single complex amplitude pair (a CW field is one Fourier mode).
struct CwOracle {
  const CavityConfig& cfg;
  std::vector<DerivedCoefficients> coeffs;

  explicit CwOracle(const CavityConfig& c) : cfg(c) {
    for (const auto& s : c.segments)
      coeffs.push_back(derive_coefficients(s, c.lambda0_nm, c.total_length_m()));
  }

  static void rhs(cplx u, cplx v, double gamma, cplx& du, cplx& dv) {
    const cplx i{0.0, 1.0};
    du = i * gamma * ((std::norm(u) + 2.0 / 3.0 * std::norm(v)) * u +
                      v * v * std::conj(u) / 3.0);
    dv = i * gamma * ((std::norm(v) + 2.0 / 3.0 * std::norm(u)) * v +
                      u * u * std::conj(v) / 3.0);
  }

  void nonlinear(cplx& u, cplx& v, double gamma, double h) const {
    const int n_sub = 4;
    const double hs = h / n_sub;
    for (int s = 0; s < n_sub; ++s) {
      cplx k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      rhs(u, v, gamma, k1u, k1v);
      rhs(u + 0.5 * hs * k1u, v + 0.5 * hs * k1v, gamma, k2u, k2v);
      rhs(u + 0.5 * hs * k2u, v + 0.5 * hs * k2v, gamma, k3u, k3v);
      rhs(u + hs * k3u, v + hs * k3v, gamma, k4u, k4v);
      u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
  }

  // One round trip on the CW pair; energy = (|u|^2+|v|^2) * window.
  void trip(cplx& u, cplx& v) const {
    const double cph = std::cos(cfg.polarizer_angle_rad);
    const double sph = std::sin(cfg.polarizer_angle_rad);
    const cplx a = u * cph + v * sph;
    u = a * cph;
    v = a * sph;
    v *= std::polar(1.0, cfg.phase_bias_rad);
    for (std::size_t si = 0; si < cfg.segments.size(); ++si) {
      const auto& seg = cfg.segments[si];
      if (seg.length_km <= 0.0) continue;
      const auto& c = coeffs[si];
      const double energy = (std::norm(u) + std::norm(v)) * cfg.window_ps;
      const double g = seg.small_signal_gain > 0.0
                           ? seg.small_signal_gain *
                                 std::exp(-energy / seg.sat_energy_pj)
                           : 0.0;
      const auto n_steps = static_cast<int>(
          std::max(1.0, std::round(seg.length_km / cfg.step.step_size_km)));
      const double h = seg.length_km / n_steps;
      auto linear = [&](double hh) {
        u *= std::exp(hh * g / 2.0) * std::polar(1.0, hh * c.beta_bi);
        v *= std::exp(hh * g / 2.0) * std::polar(1.0, -hh * c.beta_bi);
      };
      linear(h / 2.0);
      for (int k = 0; k < n_steps; ++k) {
        nonlinear(u, v, seg.gamma, h);
        linear(k + 1 < n_steps ? h : h / 2.0);
      }
    }
    const double keep = std::sqrt(1.0 - cfg.coupler_out);
    u *= keep;
    v *= keep;
  }
};

}  // namespace

TEST_CASE("CW steady state matches the scalar fixed-point oracle") {
  CavityConfig cfg = small_grid_config();
  cfg.grid_samples = 64;
  cfg.init_dip_depth = 0.0;
  cfg.init_noise_amplitude = 0.0;
  cfg.max_round_trips = 4000;
  cfg.convergence_tol = 1e-10;
  Cavity cav(cfg);
  TimeGrid g = make_grid(cfg.grid_samples, cfg.window_ps);
  VectorField f0 = init_cw_with_dip(g, cfg.init_cw_power_w, 0.0, 1.0, 0.0, 1);
  RunResult run = cav.run_to_steady_state(std::move(f0));
  REQUIRE(run.status == RunStatus::converged);
  const double e_sim = total_energy(run.field);

  CwOracle oracle(cfg);
  cplx u = std::sqrt(cfg.init_cw_power_w), v = u;
  double e_prev = 0.0, e_cur = 0.0;
  for (int k = 0; k < 4000; ++k) {
    oracle.trip(u, v);
    e_prev = e_cur;
    e_cur = (std::norm(u) + std::norm(v)) * cfg.window_ps;
    if (k > 100 && std::fabs(e_cur - e_prev) <= 1e-12 * e_cur) break;
  }
  CHECK(e_cur > 0.0);
  CHECK(e_sim == doctest::Approx(e_cur).epsilon(1e-6));
}

TEST_CASE("run_to_steady_state flags a decaying cavity as extinguished") {
  CavityConfig cfg = small_grid_config();
  for (auto& s : cfg.segments) s.small_signal_gain = 0.0;
  cfg.max_round_trips = 5000;
  cfg.init_noise_amplitude = 0.0;
  Cavity cav(cfg);
  TimeGrid g = make_grid(cfg.grid_samples, cfg.window_ps);
  VectorField f0 = init_cw_with_dip(g, 0.01, 0.3, 2.0, 0.0, 1);
  RunResult run = cav.run_to_steady_state(std::move(f0));
  CHECK(run.status == RunStatus::extinguished);
}

TEST_CASE("low-power CW grows until saturation balances loss") {
  CavityConfig cfg = small_grid_config();
  cfg.grid_samples = 64;
  cfg.init_dip_depth = 0.0;
  cfg.init_noise_amplitude = 0.0;
  cfg.init_cw_power_w = 1e-3;
  cfg.max_round_trips = 3000;
  cfg.convergence_tol = 1e-9;
  Cavity cav(cfg);
  TimeGrid g = make_grid(cfg.grid_samples, cfg.window_ps);
  VectorField f0 = init_cw_with_dip(g, cfg.init_cw_power_w, 0.0, 1.0, 0.0, 1);
  const double e0 = total_energy(f0);
  RunResult run = cav.run_to_steady_state(std::move(f0));
  REQUIRE(run.status == RunStatus::converged);
  const double e_final = total_energy(run.field);
  CHECK(e_final > 10.0 * e0);

  // At the fixed point the saturated gain must balance the cavity loss.
  const FiberSegment& edf = cfg.segments[0];
  const double g_steady = saturated_gain(edf, run.field);
  const double gain_factor = std::exp(g_steady * edf.length_km);
  CHECK(gain_factor > 1.0 / (1.0 - cfg.coupler_out));  // at least coupler loss
}
