#pragma once

#include <complex>
#include <span>

namespace darkring::fft {

// In-place complex DFT, unnormalized forward (e^{-i w t} kernel).
void forward(std::span<std::complex<double>> data);

// In-place inverse DFT including the 1/N normalization, so
// inverse(forward(x)) == x up to rounding.
void inverse(std::span<std::complex<double>> data);

}  // namespace darkring::fft
