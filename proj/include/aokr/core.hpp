#pragma once

// Dimensionless parameterisation of the atom-optics kicked rotor.
//
// Momenta are measured in two-photon recoils, p/(2ħk_L) = n + β, and
// energies as E = ⟨(p/2ħk_L)²⟩/2.

#include <numbers>

namespace aokr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Caesium recoil frequency implied by a first resonance at T = 60.5 µs.
inline constexpr double kCaesiumRecoilFrequency = kTwoPi / (8.0 * 60.5e-6);

struct LabParams {
  double rabi_frequency = 0.0;      // Ω [rad/s]
  double detuning = 2.0e9;          // Δ [rad/s]
  double pulse_duration = 0.0;      // τ_p [s]
  double kick_period = 60.5e-6;     // T [s]
  double recoil_frequency = kCaesiumRecoilFrequency;  // ω_r [rad/s]
  double se_probability_per_pulse = 0.025;

  void validate() const;
};

struct ScaledParams {
  double hbar = kTwoPi;  // ℏ̄ = 8 ω_r T
  double kappa = 0.0;    // κ
  int kicks = 20;

  /// Kick strength per unit ℏ̄, k = κ/ℏ̄.
  double k() const { return kappa / hbar; }

  static ScaledParams from_k(double hbar, double k, int kicks) { return {hbar, k * hbar, kicks}; }

  void validate() const;
};

/// Ω_eff = Ω²/Δ. Throws DetuningTooSmall unless Δ > 0 and Δ ≥ 10·Ω.
double effective_potential(double rabi_frequency, double detuning);

/// ℏ̄ = 8 ω_r T and κ = Ω_eff ω_r T τ_p.
ScaledParams scale_params(const LabParams& lab, int kicks = 20);

double hbar_from_period(double period, double recoil_frequency = kCaesiumRecoilFrequency);

double period_from_hbar(double hbar, double recoil_frequency = kCaesiumRecoilFrequency);

}  // namespace aokr
