#pragma once

namespace darkring {

// Speed of light in nm/ps (== km/s * 1e-3). Convenient for the
// ps / nm / km unit system used throughout.
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace darkring
