#include "aokr/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "aokr/error.hpp"

namespace aokr::noise {

void NoiseConfig::validate() const {
  if (!(amplitude_level >= 0.0 && amplitude_level <= 2.0)) {
    throw InvalidNoiseLevel("amplitude noise level " + std::to_string(amplitude_level) +
                            " outside [0,2]");
  }
  if (!(period_level >= 0.0 && period_level < 1.0)) {
    throw InvalidNoiseLevel("period noise level " + std::to_string(period_level) + " outside [0,1)");
  }
  if (!(se_probability >= 0.0 && se_probability <= 1.0)) {
    throw InvalidNoiseLevel("spontaneous-emission probability " + std::to_string(se_probability) +
                            " outside [0,1]");
  }
  if (!(period_quantum >= 0.0)) throw InvalidNoiseLevel("period quantum must be >= 0");
}

NoiseRealization sample_realization(const NoiseConfig& cfg, int n_kicks, int n_atoms) {
  cfg.validate();
  if (n_kicks < 0 || n_atoms < 0) throw std::invalid_argument("kick and atom counts must be >= 0");

  NoiseRealization r;
  r.config_ = cfg;
  r.atoms_ = static_cast<std::size_t>(n_atoms);
  r.se_probability_ = cfg.se_probability;
  r.se_events_ = CounterRng(cfg.master_seed, cfg.realization_index, Stream::se_event);
  r.se_betas_ = CounterRng(cfg.master_seed, cfg.realization_index, Stream::se_beta);

  const CounterRng amp(cfg.master_seed, cfg.realization_index, Stream::amplitude);
  const CounterRng per(cfg.master_seed, cfg.realization_index, Stream::period);
  const double half_a = 0.5 * cfg.amplitude_level;
  const double half_p = 0.5 * cfg.period_level;

  r.amplitude_factors_.resize(static_cast<std::size_t>(n_kicks));
  r.period_offsets_.resize(static_cast<std::size_t>(n_kicks));
  for (int n = 0; n < n_kicks; ++n) {
    const auto i = static_cast<std::size_t>(n);
    r.amplitude_factors_[i] = cfg.amplitude_level > 0.0 ? 1.0 + amp.uniform(-half_a, half_a, i) : 1.0;
    double offset = 0.0;
    if (n > 0 && cfg.period_level > 0.0) {
      offset = per.uniform(-half_p, half_p, i);
      if (cfg.period_quantum > 0.0) offset = cfg.period_quantum * std::round(offset / cfg.period_quantum);
    }
    r.period_offsets_[i] = offset;
  }
  return r;
}

bool NoiseRealization::spontaneous_emission(std::size_t atom, std::size_t kick) const {
  if (se_probability_ <= 0.0) return false;
  return se_events_.uniform(atom, kick) < se_probability_;
}

double NoiseRealization::reshuffled_beta(std::size_t atom, std::size_t kick) const {
  return se_betas_.uniform(atom, kick);
}

nlohmann::json NoiseRealization::to_json() const {
  return {
      {"master_seed", config_.master_seed},
      {"realization_index", config_.realization_index},
      {"amplitude_level", config_.amplitude_level},
      {"period_level", config_.period_level},
      {"se_probability", config_.se_probability},
      {"period_quantum", config_.period_quantum},
      {"atoms", atoms_},
      {"amplitude_factors", amplitude_factors_},
      {"period_offsets", period_offsets_},
  };
}

NoiseRealization NoiseRealization::from_json(const nlohmann::json& j) {
  NoiseConfig cfg;
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.realization_index = j.at("realization_index").get<std::uint64_t>();
  cfg.amplitude_level = j.at("amplitude_level").get<double>();
  cfg.period_level = j.at("period_level").get<double>();
  cfg.se_probability = j.at("se_probability").get<double>();
  cfg.period_quantum = j.value("period_quantum", 0.0);
  const auto factors = j.at("amplitude_factors").get<std::vector<double>>();
  auto r = sample_realization(cfg, static_cast<int>(factors.size()), j.at("atoms").get<int>());
  // The stored arrays are authoritative for replay.
  r.amplitude_factors_ = factors;
  r.period_offsets_ = j.at("period_offsets").get<std::vector<double>>();
  if (r.period_offsets_.size() != r.amplitude_factors_.size())
    throw std::invalid_argument("noise record: amplitude and period arrays differ in length");
  return r;
}

std::vector<double> free_evolution_intervals(std::span<const double> period_offsets) {
  std::vector<double> out;
  if (period_offsets.size() < 2) return out;
  out.reserve(period_offsets.size() - 1);
  for (std::size_t n = 0; n + 1 < period_offsets.size(); ++n) {
    const double dt = 1.0 + period_offsets[n + 1] - period_offsets[n];
    if (!(dt > 0.0)) {
      throw NonpositiveInterval("pulse " + std::to_string(n + 1) + " does not follow pulse " +
                                std::to_string(n) + " (interval " + std::to_string(dt) + ")");
    }
    out.push_back(dt);
  }
  return out;
}

}  // namespace aokr::noise
