#include "darkring/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace darkring::fft {
namespace {

// FFTW planning is not thread safe; execution via fftw_execute_dft on
// caller-provided buffers is. Plans are cached per (size, direction).
std::mutex g_plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
  static std::unordered_map<std::size_t, fftw_plan> fwd, bwd;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = (sign == FFTW_FORWARD) ? fwd : bwd;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_complex* buf = fftw_alloc_complex(n);
  if (!buf) throw std::bad_alloc();
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(n, p);
  return p;
}

void execute(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  fftw_plan p = plan_for(data.size(), sign);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, raw, raw);
}

}  // namespace

void forward(std::span<std::complex<double>> data) {
  execute(data, FFTW_FORWARD);
}

void inverse(std::span<std::complex<double>> data) {
  execute(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& x : data) x *= scale;
}

}  // namespace darkring::fft
