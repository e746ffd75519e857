#pragma once

// ε-classical standard map near the resonance ℏ̄ = 2πm, and the ordinary
// classical standard map as the ℏ̄ → 0 reference.
//
//   φ_{n+1} = φ_n + sign(ε) ρ_n + π l + ℏ̄ β   (mod 2π)
//   ρ_{n+1} = ρ_n + |ε| k R_A,n sin φ_{n+1}
//
// with ε = ℏ̄ − 2πm and energies E_n = ε⁻² ⟨ρ_n²⟩ / 2.

#include <cstdint>
#include <vector>

#include "aokr/noise.hpp"
#include "aokr/qkr.hpp"

namespace aokr::epsmap {

struct EpsParams {
  double epsilon = 0.0;  // ℏ̄ − 2πm
  double k = 0.0;        // κ/ℏ̄
  int l = 1;
  int m = 1;
  double beta = 0.0;

  double hbar() const;
  /// True when |ε| exceeds 0.5 and the map is no longer a faithful model.
  bool beyond_validity() const;
  void validate() const;
};

struct PhasePoint {
  double phi = 0.0;
  double rho = 0.0;
};

/// One iteration; the angle is updated first, then the momentum.
PhasePoint eps_step(PhasePoint s, const EpsParams& p, double amplitude_factor = 1.0);

/// Exact inverse of eps_step for the same parameters and amplitude factor.
PhasePoint eps_step_inverse(PhasePoint s, const EpsParams& p, double amplitude_factor = 1.0);

/// Trajectory ensemble; β is carried per trajectory.
struct EpsEnsemble {
  std::vector<double> phi;
  std::vector<double> rho;
  std::vector<double> beta;
  std::vector<double> kick_factor;
  int kicks = 0;

  std::size_t size() const { return phi.size(); }
};

/// Initial ensemble for one realization: n₀, β and g from qkr::prepare_atoms,
/// ρ₀ = |ε| n₀ and φ₀ uniform on [0, 2π).
EpsEnsemble make_ensemble(const EpsParams& p, const qkr::EnsembleSpec& spec, std::uint64_t master_seed,
                          std::uint64_t realization_index);

/// Advances every trajectory by one kick with amplitude factor R.
void step_ensemble(EpsEnsemble& ens, const EpsParams& p, double amplitude_factor);

/// ε⁻² ⟨ρ²⟩ / 2.
double ensemble_energy(const EpsEnsemble& ens, double epsilon);

enum class ZeroEpsilon {
  reject,    // throw EpsilonZero
  analytic,  // resonant limit ⟨(n₀ + g k Σ R_s sin(φ₀ + sθ))²⟩/2, θ = πl + 2πmβ
};

/// Energy per kick averaged over trajectories, then over realizations of the
/// amplitude noise (realization r uses cfg.realization_index + r). Period
/// noise and spontaneous emission are not part of this model: a nonzero
/// period level is rejected, the SE probability is ignored.
qkr::EnsembleResult eps_energy(const EpsParams& p, int n_kicks, const qkr::EnsembleSpec& spec,
                               const noise::NoiseConfig& cfg, int n_realizations,
                               ZeroEpsilon at_zero = ZeroEpsilon::reject);

struct PortraitGrid {
  int n_phi = 16;
  int n_rho = 16;
  double rho_min = -0.5;
  double rho_max = 0.5;
};

struct PortraitPoint {
  double phi;
  double rho;
  int trajectory;
};

/// Every iterate (including the start) of each grid trajectory, trajectory by
/// trajectory. With amplitude noise trajectory t uses its own realization
/// cfg.realization_index + t.
std::vector<PortraitPoint> phase_portrait(const EpsParams& p, const PortraitGrid& grid, int n_iters,
                                          const noise::NoiseConfig& cfg);

// ---------------------------------------------------------------------------
// Classical standard map: φ_{n+1} = φ_n + ρ_n Δτ_n, ρ_{n+1} = ρ_n + κ R_A,n sin φ_{n+1}.

struct ClassicalEnsemble {
  long trajectories = 1'000'000;
  /// Trajectories sharing one noise realization.
  long trajectories_per_realization = 100;
  /// ρ₀ uniform on [0, rho_width).
  double rho_width = kTwoPi;
  unsigned threads = 1;
};

struct ClassicalEnergy {
  std::vector<double> energy;  // ⟨(ρ_n − ρ₀)²⟩ / (2ℏ̄²), n = 0…N
  double slope = 0.0;          // least-squares slope over n = 0…N
};

ClassicalEnergy classical_map_energy(double kappa, double hbar, int n_kicks, const ClassicalEnsemble& ens,
                                     const noise::NoiseConfig& cfg);

/// Least-squares slope of y against its index.
double least_squares_slope(std::span<const double> y);

}  // namespace aokr::epsmap
