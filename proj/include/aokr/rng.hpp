#pragma once

// Stateless counter-based random numbers.
//
// Every draw is a pure function of (master seed, realization, stream, counter
// words), so results never depend on evaluation order or thread count. The
// mixing function is the SplitMix64 finaliser; uniform doubles take the top 53
// bits. Standard-library distributions are avoided on purpose: their output is
// implementation-defined and would break bit reproducibility across toolchains.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace aokr {

/// Independent random streams; values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  amplitude = 1,
  period = 2,
  se_event = 3,
  se_beta = 4,
  kappa_spread = 5,
  initial_momentum = 6,
  initial_beta = 7,
  initial_phase = 8,
  initial_rho = 9,
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of key words.
constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL)); }

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t master_seed, std::uint64_t realization, Stream stream)
      : key_(combine(combine(mix64(master_seed), realization), static_cast<std::uint64_t>(stream))) {}

  constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0) const { return combine(combine(key_, a), b); }

  /// Uniform on [0,1).
  constexpr double uniform(std::uint64_t a, std::uint64_t b = 0) const {
    return static_cast<double>(bits(a, b) >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi, std::uint64_t a, std::uint64_t b = 0) const {
    return lo + (hi - lo) * uniform(a, b);
  }

  /// Standard normal (Box–Muller on two dedicated sub-counters).
  double normal(std::uint64_t a, std::uint64_t b = 0) const {
    const double u1 = 1.0 - uniform(a, 2 * b);  // (0,1]
    const double u2 = uniform(a, 2 * b + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace aokr
