#pragma once

// Pulse-train noise: per-kick amplitude factors, per-pulse timing offsets and
// per-atom spontaneous-emission events.
//
// Pulse n fires at scaled time n + δ_P,n. Offsets are drawn independently for
// every pulse around its nominal grid position, so they do not accumulate.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "aokr/rng.hpp"

namespace aokr::noise {

struct NoiseConfig {
  double amplitude_level = 0.0;  // 𝓛_A ∈ [0,2]
  double period_level = 0.0;     // 𝓛_P ∈ [0,1)
  double se_probability = 0.0;   // per atom per pulse
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
  /// Optional timing grid (units of T) onto which δ_P is rounded; 0 = continuous.
  double period_quantum = 0.0;

  /// Throws InvalidNoiseLevel for out-of-range levels.
  void validate() const;
};

/// One concrete draw of the noise for a given config. Immutable once built.
class NoiseRealization {
 public:
  NoiseRealization() = default;

  std::span<const double> amplitude_factors() const { return amplitude_factors_; }
  std::span<const double> period_offsets() const { return period_offsets_; }
  std::size_t kicks() const { return amplitude_factors_.size(); }
  std::size_t atoms() const { return atoms_; }
  double se_probability() const { return se_probability_; }

  /// True when atom `atom` scatters a photon right after kick `kick`.
  bool spontaneous_emission(std::size_t atom, std::size_t kick) const;

  /// Quasimomentum drawn for atom `atom` at the emission after kick `kick`.
  double reshuffled_beta(std::size_t atom, std::size_t kick) const;

  /// Audit record: seed, levels and the sampled arrays.
  nlohmann::json to_json() const;
  static NoiseRealization from_json(const nlohmann::json& j);

  friend NoiseRealization sample_realization(const NoiseConfig&, int, int);

 private:
  NoiseConfig config_;
  std::vector<double> amplitude_factors_;
  std::vector<double> period_offsets_;
  std::size_t atoms_ = 0;
  double se_probability_ = 0.0;
  CounterRng se_events_{0, 0, Stream::se_event};
  CounterRng se_betas_{0, 0, Stream::se_beta};
};

/// Draws R_A,n = 1 + δ_A,n and δ_P,n (with δ_P,0 = 0) for n_kicks pulses.
NoiseRealization sample_realization(const NoiseConfig& cfg, int n_kicks, int n_atoms);

/// Δτ_n = 1 + δ_P,n+1 − δ_P,n between consecutive pulses (size N−1).
/// Throws NonpositiveInterval if pulse order is violated.
std::vector<double> free_evolution_intervals(std::span<const double> period_offsets);

}  // namespace aokr::noise
