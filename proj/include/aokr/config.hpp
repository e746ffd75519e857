#pragma once

// Scan configuration: parsed from strict JSON, then overridden by CLI flags.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "aokr/core.hpp"
#include "aokr/qkr.hpp"

namespace aokr::cli {

enum class Engine { quantum, eps_classical, theory };
enum class Abscissa { hbar, epsilon, period_us };
enum class NoiseKind { amplitude, period };

struct ScanSpec {
  Engine engine = Engine::quantum;
  Abscissa abscissa = Abscissa::hbar;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  NoiseKind noise = NoiseKind::amplitude;
  std::vector<double> levels;
  int kicks = 20;
  double k = 3.77;  // κ/ℏ̄, held fixed along the scan
  int atoms = 1000;
  int realizations = 12;
  int zero_noise_realizations = 3;
  std::uint64_t seed = 0;
  double sigma_p = 2.5;
  qkr::BetaMode beta_mode = qkr::BetaMode::from_momentum;
  double beta = 0.0;
  double se_probability = 0.025;
  double kappa_spread = 0.0;
  double detection_window = std::numeric_limits<double>::infinity();
  int cutoff = qkr::kDefaultCutoff;
  int resonance_order = 1;  // m in ℏ̄ = 2πm + ε
  double recoil_frequency = kCaesiumRecoilFrequency;
  double period_quantum = 0.0;  // units of T; 0 = continuous timing
  qkr::KickMethod kick_method = qkr::KickMethod::convolution;
  unsigned threads = 0;  // 0 = all hardware threads
  /// Momentum histogram bin for --distributions (two-photon recoils).
  double histogram_bin = 0.29;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Abscissa grid lo, lo + step, … ≤ hi.
  std::vector<double> points() const;
  /// ℏ̄ at an abscissa value.
  double hbar_at(double x) const;
  /// Realizations used for a noise level.
  int realizations_for(double level) const;
};

/// Every field with its resolved value (the audit record). The thread count
/// is left out: it never changes results.
nlohmann::json to_json(const ScanSpec& spec);

/// Strict conversion: unknown keys and wrongly typed values are ConfigErrors.
ScanSpec spec_from_json(const nlohmann::json& j);

/// Parses JSON text, rejecting duplicate keys; parse errors carry line and column.
nlohmann::json parse_strict(const std::string& text, const std::string& origin = "<string>");

/// Reads, parses and validates a config file.
ScanSpec load_config(const std::string& path);

/// Same as load_config but returns the raw object for merging with flags.
nlohmann::json read_config_json(const std::string& path);

std::string to_string(Engine e);
std::string to_string(Abscissa a);
std::string to_string(NoiseKind n);
std::string to_string(qkr::BetaMode b);
std::string to_string(qkr::KickMethod m);

}  // namespace aokr::cli
