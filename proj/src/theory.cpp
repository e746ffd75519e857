#include "aokr/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aokr/error.hpp"
#include "aokr/quadrature.hpp"

namespace aokr::theory {

void DiffusionInputs::validate() const {
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  if (!(amplitude_level >= 0.0 && amplitude_level <= 2.0))
    throw InvalidNoiseLevel("amplitude noise level " + std::to_string(amplitude_level) + " outside [0,2]");
}

double quantum_kick_strength(double kappa, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  return 2.0 * kappa * std::sin(0.5 * hbar) / hbar;
}

double bessel_argument(const DiffusionInputs& in) {
  return in.regime == Regime::classical ? in.kappa : quantum_kick_strength(in.kappa, in.hbar);
}

double diffusion_rate(const DiffusionInputs& in) {
  in.validate();
  const double K = bessel_argument(in);
  const auto j = bessel_j_sequence(3, K);
  const double k = in.kappa / in.hbar;
  return 0.5 * k * k * (0.5 - j[2] - j[1] * j[1] + j[2] * j[2] + j[3] * j[3]);
}

double noise_averaged_bessel(int order, double K, double amplitude_level) {
  if (!(amplitude_level >= 0.0 && amplitude_level <= 2.0))
    throw InvalidNoiseLevel("amplitude noise level " + std::to_string(amplitude_level) + " outside [0,2]");
  if (amplitude_level == 0.0 || K == 0.0) return bessel_j(order, K);
  const double half = 0.5 * amplitude_level;
  const double integral =
      integrate_doubling([&](double delta) { return bessel_j(order, K * (1.0 + delta)); }, -half, half);
  return integral / amplitude_level;
}

double diffusion_rate_with_noise(const DiffusionInputs& in) {
  in.validate();
  if (in.amplitude_level == 0.0) return diffusion_rate(in);
  const double K = bessel_argument(in);
  const double L = in.amplitude_level;
  const double j1 = noise_averaged_bessel(1, K, L);
  const double j2 = noise_averaged_bessel(2, K, L);
  const double j3 = noise_averaged_bessel(3, K, L);
  const double kappa2 = in.kappa * in.kappa;
  const double hbar2 = in.hbar * in.hbar;
  const double variance = kappa2 * L * L / 12.0;
  return (kappa2 + variance) / (4.0 * hbar2) + kappa2 / (2.0 * hbar2) * (-j2 - j1 * j1 + j2 * j2 + j3 * j3);
}

namespace {

double height_coefficient(ResonanceMode mode) {
  return mode == ResonanceMode::max_amplitude_noise ? 1.0 / 3.0 : 0.25;
}

}  // namespace

double resonance_height(double k, int n, ResonanceMode mode) {
  if (n < 0) throw std::invalid_argument("kick count must be >= 0");
  return height_coefficient(mode) * k * k * n;
}

double resonance_height(double k, int n, double amplitude_level) {
  if (amplitude_level == 0.0) return resonance_height(k, n, ResonanceMode::no_noise);
  if (amplitude_level == 2.0) return resonance_height(k, n, ResonanceMode::max_amplitude_noise);
  throw UnsupportedNoiseLevel("closed-form resonance height exists only for amplitude noise levels 0 and 2, got " +
                              std::to_string(amplitude_level));
}

double extract_k_from_energy(double energy, int n, ResonanceMode mode) {
  if (!(energy >= 0.0)) throw std::invalid_argument("energy must be >= 0");
  if (n < 1) throw std::invalid_argument("kick count must be >= 1");
  return std::sqrt(energy / (height_coefficient(mode) * n));
}

}  // namespace aokr::theory
