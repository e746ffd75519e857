#include "spectral_kick.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace aokr::qkr::detail {
namespace {

struct Plans {
  fftw_plan to_angle;     // FFTW_BACKWARD: Σ_n c_n e^{+i n θ}
  fftw_plan to_momentum;  // FFTW_FORWARD
  std::vector<double> cos_grid;
};

// Planning is not thread-safe in FFTW; execution with new-array calls is.
const Plans& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int len = static_cast<int>(n);
  auto* a = fftw_alloc_complex(n);
  auto* b = fftw_alloc_complex(n);
  Plans p;
  p.to_angle = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.to_momentum = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  p.cos_grid.resize(n);
  for (std::size_t t = 0; t < n; ++t) p.cos_grid[t] = std::cos(2.0 * std::numbers::pi * double(t) / double(n));
  return cache.emplace(n, std::move(p)).first->second;
}

}  // namespace

void spectral_kick(std::span<std::complex<double>> ladder, double k_eff, std::size_t min_grid) {
  const std::size_t n = std::bit_ceil(std::max(min_grid, 2 * ladder.size()));
  const Plans& plans = plans_for(n);

  thread_local std::vector<std::complex<double>> grid;
  thread_local std::vector<std::complex<double>> spectrum;
  grid.assign(n, {0.0, 0.0});
  spectrum.resize(n);
  std::copy(ladder.begin(), ladder.end(), spectrum.begin());
  std::fill(spectrum.begin() + static_cast<std::ptrdiff_t>(ladder.size()), spectrum.end(), std::complex<double>{});

  auto* in = reinterpret_cast<fftw_complex*>(spectrum.data());
  auto* out = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plans.to_angle, in, out);
  for (std::size_t t = 0; t < n; ++t) grid[t] *= std::polar(1.0, k_eff * plans.cos_grid[t]);
  fftw_execute_dft(plans.to_momentum, out, in);

  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < ladder.size(); ++j) ladder[j] = spectrum[j] * scale;
}

}  // namespace aokr::qkr::detail
