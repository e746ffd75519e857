#pragma once

// Closed-form predictors for the kicked rotor near quantum resonance.
//
// Growth rates are in the scaled energy units used throughout the library,
// i.e. for momentum ρ/ℏ̄ (already divided by ℏ̄² relative to the textbook
// diffusion constants for ρ).

#include "aokr/bessel.hpp"

namespace aokr::theory {

enum class Regime { classical, quantum };

struct DiffusionInputs {
  double kappa = 0.0;
  double hbar = 1.0;
  Regime regime = Regime::quantum;
  double amplitude_level = 0.0;

  void validate() const;
};

/// κ_q = 2κ sin(ℏ̄/2)/ℏ̄.
double quantum_kick_strength(double kappa, double hbar);

/// Bessel argument K for the regime: κ (classical) or κ_q (quantum).
double bessel_argument(const DiffusionInputs& in);

/// Early-time growth rate without noise:
/// D = ½(κ/ℏ̄)² (½ − J₂(K) − J₁²(K) + J₂²(K) + J₃²(K)).
double diffusion_rate(const DiffusionInputs& in);

/// 𝒥_n(K): J_n averaged over K → K(1+δ), δ ~ Uniform(−𝓛_A/2, 𝓛_A/2).
/// Gauss–Legendre from 64 points, doubled until the change is below 1e-10.
double noise_averaged_bessel(int order, double K, double amplitude_level);

/// Growth rate with amplitude noise:
/// D = (κ² + Var δκ)/(4ℏ̄²) + (κ²/2ℏ̄²)(−𝒥₂ − 𝒥₁² + 𝒥₂² + 𝒥₃²), Var δκ = κ²𝓛_A²/12.
double diffusion_rate_with_noise(const DiffusionInputs& in);

enum class ResonanceMode {
  no_noise,             // (1/4) k² n
  max_amplitude_noise,  // (1/3) k² n, 𝓛_A = 2
  quasilinear,          // (1/4) k² n
};

/// Peak energy after n kicks at exact resonance for kick strength k = κ/ℏ̄.
double resonance_height(double k, int n, ResonanceMode mode);

/// Same, selecting the mode from an amplitude noise level; only 0 and 2 have
/// closed forms (UnsupportedNoiseLevel otherwise).
double resonance_height(double k, int n, double amplitude_level);

/// Inverse of resonance_height: k from a measured energy after n ≥ 1 kicks.
double extract_k_from_energy(double energy, int n, ResonanceMode mode);

}  // namespace aokr::theory
