#pragma once

#include <complex>
#include <span>

namespace aokr::qkr::detail {

/// exp(i k cos φ) applied through an FFT angle grid of at least
/// `min_grid` points; the ladder is zero-padded to avoid wrap-around.
void spectral_kick(std::span<std::complex<double>> ladder, double k_eff, std::size_t min_grid);

}  // namespace aokr::qkr::detail
