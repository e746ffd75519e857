#include "aokr/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aokr/error.hpp"

namespace aokr {

void LabParams::validate() const {
  if (!(rabi_frequency >= 0.0)) throw std::invalid_argument("rabi_frequency must be >= 0");
  if (!(pulse_duration >= 0.0)) throw std::invalid_argument("pulse_duration must be >= 0");
  if (!(kick_period > 0.0)) throw std::invalid_argument("kick_period must be > 0");
  if (!(recoil_frequency > 0.0)) throw std::invalid_argument("recoil_frequency must be > 0");
  if (!(se_probability_per_pulse >= 0.0 && se_probability_per_pulse <= 1.0))
    throw std::invalid_argument("se_probability_per_pulse must lie in [0,1]");
}

void ScaledParams::validate() const {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  if (kicks < 0) throw std::invalid_argument("kick count must be >= 0");
}

double effective_potential(double rabi_frequency, double detuning) {
  if (detuning <= 0.0 || detuning < 10.0 * rabi_frequency) {
    throw DetuningTooSmall("detuning " + std::to_string(detuning) +
                           " rad/s violates the large-detuning condition Δ >= 10·Ω (Ω = " +
                           std::to_string(rabi_frequency) + " rad/s)");
  }
  return rabi_frequency * rabi_frequency / detuning;
}

ScaledParams scale_params(const LabParams& lab, int kicks) {
  lab.validate();
  const double omega_eff = effective_potential(lab.rabi_frequency, lab.detuning);
  ScaledParams out;
  out.hbar = hbar_from_period(lab.kick_period, lab.recoil_frequency);
  out.kappa = omega_eff * lab.recoil_frequency * lab.kick_period * lab.pulse_duration;
  out.kicks = kicks;
  return out;
}

double hbar_from_period(double period, double recoil_frequency) {
  if (period < 0.0) throw std::invalid_argument("kick period must be >= 0");
  return 8.0 * recoil_frequency * period;
}

double period_from_hbar(double hbar, double recoil_frequency) {
  if (!(recoil_frequency > 0.0)) throw std::invalid_argument("recoil_frequency must be > 0");
  return hbar / (8.0 * recoil_frequency);
}

}  // namespace aokr
