#pragma once

#include <optional>
#include <string>

#include "darkring/sweep.hpp"

namespace darkring {

/// Cavity defaults matching the modeled laser: EDF 5 m (D = -32, gain),
/// SMF 8 m (D = +18), DCF 5.2 m (D = -2), 50% output coupler, polarizer at
/// 0.13 pi, gamma = 3 /(W km), P_sat = 500 pJ, gain bandwidth 24 nm,
/// L/L_b = 0.01, lambda0 = 1565 nm.
CavityConfig default_cavity_config();

/// Default 8x8 desk-scale sweep over SMF length and gain.
SweepSpec default_sweep_spec();

struct ParsedConfig {
  CavityConfig cavity;
  std::optional<SweepSpec> sweep;  // present when the file has a [sweep] section
  ClassifyOptions classify_opts;
};

/// Parse the INI-style config grammar documented in docs/config.md.
/// Unknown sections or keys are rejected; errors cite line and key.
ParsedConfig parse_config(const std::string& text);

ParsedConfig parse_config_file(const std::string& path);

/// Stable FNV-1a hash of a canonical rendering of the config, for run
/// metadata and reproducibility checks.
std::string config_hash(const CavityConfig& cfg);

/// Canonical key=value rendering of every resolved field.
std::string render_config(const CavityConfig& cfg);

}  // namespace darkring
