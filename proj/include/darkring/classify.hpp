#pragma once

#include "darkring/analysis.hpp"
#include "darkring/cavity.hpp"

namespace darkring {

struct ClassifyOptions {
  double depth_threshold = 0.2;
  double lambda0_nm = 1565.0;
  double extinguished_energy_pj = 1e-9;
  // Max tolerated dip drift, in samples per round trip, over the final
  // stability window.
  double max_drift_samples_per_trip = 1.0;
};

/// Deterministic taxonomy of a finished run: extinguished / cw /
/// single_dark / multiple_dark / unstable / not_converged.
StateClassification classify(const RunResult& run, const ClassifyOptions& opt);

}  // namespace darkring
