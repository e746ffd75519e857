#pragma once

// Quantum kicked-rotor ensemble simulator.
//
// Each atom is a quasimomentum β together with complex amplitudes on a
// truncated integer ladder n ∈ [c − M, c + M], centred on the atom's initial
// momentum class c. Momentum in two-photon recoils is p = n + β.
//
// One period of the evolution is
//   kick:  c_n ← Σ_m i^m J_m(k_eff) c_{n−m},   k_eff = g·κ_n/ℏ̄
//   free:  c_n ← c_n · exp(−i ℏ̄ (n+β)² Δτ / 2)

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "aokr/core.hpp"
#include "aokr/noise.hpp"

namespace aokr::qkr {

using complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 512;
/// Probability allowed in the outer 10% of the ladder before it is declared too short.
inline constexpr double kTailMassLimit = 1e-8;

enum class KickMethod {
  convolution,  // band-limited Bessel convolution in momentum space
  spectral,     // FFT to an angle grid, pointwise phase, inverse FFT
};

class QuantumState {
 public:
  /// All-zero ladder of 2M+1 sites centred on momentum class `center`.
  QuantumState(int cutoff, long center, double beta, double kick_factor = 1.0);

  /// |n0 + β⟩ on a ladder centred at n0.
  static QuantumState plane_wave(int cutoff, long n0, double beta, double kick_factor = 1.0);

  int cutoff() const { return cutoff_; }
  long center() const { return center_; }
  double beta() const { return beta_; }
  double kick_factor() const { return kick_factor_; }
  std::size_t size() const { return amps_.size(); }

  /// Integer momentum index of ladder site j.
  long index_at(std::size_t j) const { return center_ + static_cast<long>(j) - cutoff_; }

  std::span<const complex> amplitudes() const { return amps_; }
  complex amplitude(long n) const;
  void set_amplitude(long n, complex value);

  double norm() const;
  /// ⟨(n+β)²⟩/2.
  double energy() const;
  double mean_momentum() const;
  /// Σ|c_n|² over sites with |n − center| > 0.9 M.
  double tail_mass() const;

  /// Sites outside [support_begin, support_end) are exactly zero.
  std::size_t support_begin() const { return lo_; }
  std::size_t support_end() const { return hi_; }

  /// New quasimomentum; the ladder is shifted by the integer that keeps
  /// n + β within half a recoil of its previous value.
  void reshuffle(double new_beta);

  /// Raw ladder access for propagators; callers must keep the support
  /// bounds valid via set_support.
  std::span<complex> mutable_amplitudes() { return amps_; }
  /// Declares [begin, end) as the nonzero band, then drops negligible edge sites.
  void set_support(std::size_t begin, std::size_t end);

 private:
  int cutoff_;
  long center_;
  double beta_;
  double kick_factor_;
  std::vector<complex> amps_;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
};

/// Applies exp(i k_eff cos φ) with k_eff = g·κ_n/ℏ̄.
/// Throws CutoffInsufficient if the tail-mass limit is exceeded afterwards.
void kick(QuantumState& state, double kappa_n, double hbar, KickMethod method = KickMethod::convolution);

/// Free evolution for a duration Δτ (units of the nominal period).
void free_evolve(QuantumState& state, double dtau, double hbar);

/// Called after each kick (and any spontaneous emission) with the number of kicks applied.
using KickObserver = std::function<void(int, const QuantumState&)>;

/// Alternates kick(κ·R_A,n) and free_evolve(Δτ_n) for params.kicks kicks,
/// reshuffling β right after any kick on which this atom scatters a photon.
QuantumState evolve_atom(QuantumState initial, const ScaledParams& params,
                         const noise::NoiseRealization& realization, std::size_t atom_index,
                         KickMethod method = KickMethod::convolution, const KickObserver& observer = {});

// ---------------------------------------------------------------------------
// Ensembles

enum class BetaMode {
  from_momentum,  // β = frac(p)
  fixed,          // every atom uses EnsembleSpec::beta
  uniform,        // stratified: β_i = (i + u_i)/n_atoms
};

struct EnsembleSpec {
  int n_atoms = 1000;
  /// Width of the Gaussian initial momentum distribution (two-photon recoils).
  double sigma_p = 2.5;
  /// Explicit initial momenta; when non-empty they replace the Gaussian and
  /// are assigned to atoms cyclically.
  std::vector<double> momenta;
  BetaMode beta_mode = BetaMode::from_momentum;
  double beta = 0.0;
  /// Relative standard deviation s_κ of the per-atom kick factor g ~ N(1, s_κ), g > 0.
  double kappa_spread = 0.0;
  /// Momenta with |p| > detection_window are discarded before averaging.
  double detection_window = std::numeric_limits<double>::infinity();
  int cutoff = kDefaultCutoff;
  KickMethod kick_method = KickMethod::convolution;
  unsigned threads = 1;

  void validate() const;
};

struct AtomSeed {
  long n0;
  double beta;
  double kick_factor;
};

/// Initial momentum class, quasimomentum and kick factor of every atom for
/// one realization. Shared with the ε-classical ensembles.
std::vector<AtomSeed> prepare_atoms(const EnsembleSpec& spec, std::uint64_t master_seed,
                                    std::uint64_t realization_index);

struct MomentumDistribution {
  double bin_width = 0.0;
  std::vector<double> momentum;     // bin centres, two-photon recoils
  std::vector<double> probability;  // sums to 1 before windowing
  double mean_energy = 0.0;
  double sem = 0.0;
};

struct RealizationResult {
  std::vector<double> energy;  // after 0, 1, …, N kicks
  double atom_sem = 0.0;       // atom-to-atom standard error of the final energy
  std::optional<MomentumDistribution> distribution;
};

/// One realization of the ensemble with noise keyed by cfg. The result does
/// not depend on spec.threads.
RealizationResult simulate_realization(const EnsembleSpec& spec, const ScaledParams& params,
                                       const noise::NoiseConfig& cfg, double histogram_bin = 0.0);

struct EnsembleResult {
  std::vector<double> energy;  // mean over realizations, per kick
  std::vector<double> sem;     // per kick
  std::vector<double> realization_energies;  // final energy of each realization
  double mean = 0.0;
  double final_sem = 0.0;
  std::optional<MomentumDistribution> distribution;
};

/// Realization r uses realization_index = cfg.realization_index + r.
/// The standard error is taken across realizations (across atoms when only one).
EnsembleResult simulate_ensemble(const EnsembleSpec& spec, const ScaledParams& params, const noise::NoiseConfig& cfg,
                                 int n_realizations, double histogram_bin = 0.0);

struct EnergyEstimate {
  double mean = 0.0;
  double sem = 0.0;
};

EnergyEstimate ensemble_energy(const EnsembleSpec& spec, const ScaledParams& params, const noise::NoiseConfig& cfg,
                               int n_realizations);

/// Mean and standard error of a sample (sem = 0 for fewer than two values).
EnergyEstimate mean_and_sem(std::span<const double> values);

}  // namespace aokr::qkr
