#include "aokr/epsmap.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "aokr/error.hpp"
#include "aokr/parallel.hpp"
#include "aokr/rng.hpp"

namespace aokr::epsmap {
namespace {

constexpr std::size_t kChunk = 256;

double wrap(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Constant part of the angle advance, πl + ℏ̄β.
double drift(const EpsParams& p, double beta) { return std::numbers::pi * p.l + p.hbar() * beta; }

void require_amplitude_noise_only(const noise::NoiseConfig& cfg) {
  cfg.validate();
  if (cfg.period_level != 0.0)
    throw std::invalid_argument("period noise is not defined for the epsilon-classical map");
}

}  // namespace

double EpsParams::hbar() const { return kTwoPi * m + epsilon; }

bool EpsParams::beyond_validity() const { return std::abs(epsilon) > 0.5; }

void EpsParams::validate() const {
  if (!std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be finite");
  if (!(k >= 0.0)) throw std::invalid_argument("k must be >= 0");
  if (m < 1) throw std::invalid_argument("resonance order m must be a positive integer");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("quasimomentum must lie in [0,1)");
}

PhasePoint eps_step(PhasePoint s, const EpsParams& p, double amplitude_factor) {
  const double phi = wrap(s.phi + sign_of(p.epsilon) * s.rho + drift(p, p.beta));
  return {phi, s.rho + std::abs(p.epsilon) * p.k * amplitude_factor * std::sin(phi)};
}

PhasePoint eps_step_inverse(PhasePoint s, const EpsParams& p, double amplitude_factor) {
  const double rho = s.rho - std::abs(p.epsilon) * p.k * amplitude_factor * std::sin(s.phi);
  return {wrap(s.phi - sign_of(p.epsilon) * rho - drift(p, p.beta)), rho};
}

EpsEnsemble make_ensemble(const EpsParams& p, const qkr::EnsembleSpec& spec, std::uint64_t master_seed,
                          std::uint64_t realization_index) {
  p.validate();
  const auto atoms = qkr::prepare_atoms(spec, master_seed, realization_index);
  const CounterRng phase(master_seed, realization_index, Stream::initial_phase);
  EpsEnsemble e;
  e.phi.resize(atoms.size());
  e.rho.resize(atoms.size());
  e.beta.resize(atoms.size());
  e.kick_factor.resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    e.phi[i] = phase.uniform(0.0, kTwoPi, i);
    e.rho[i] = std::abs(p.epsilon) * static_cast<double>(atoms[i].n0);
    e.beta[i] = atoms[i].beta;
    e.kick_factor[i] = atoms[i].kick_factor;
  }
  return e;
}

void step_ensemble(EpsEnsemble& ens, const EpsParams& p, double amplitude_factor) {
  const double s = sign_of(p.epsilon);
  const double kt = std::abs(p.epsilon) * p.k * amplitude_factor;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double phi = wrap(ens.phi[i] + s * ens.rho[i] + drift(p, ens.beta[i]));
    ens.phi[i] = phi;
    ens.rho[i] += kt * ens.kick_factor[i] * std::sin(phi);
  }
  ++ens.kicks;
}

double ensemble_energy(const EpsEnsemble& ens, double epsilon) {
  if (epsilon == 0.0) throw EpsilonZero("energy rescaling by 1/eps^2 needs eps != 0");
  double sum = 0.0;
  for (double r : ens.rho) sum += r * r;
  return 0.5 * sum / static_cast<double>(ens.size()) / (epsilon * epsilon);
}

namespace {

// Per-kick energies of one realization, chunked so the sum order is fixed.
std::vector<double> realization_trace(const EpsParams& p, int n_kicks, const qkr::EnsembleSpec& spec,
                                      const noise::NoiseConfig& cfg) {
  const auto kicks = static_cast<std::size_t>(n_kicks);
  const auto realization = noise::sample_realization(cfg, n_kicks, spec.n_atoms);
  const auto factors = realization.amplitude_factors();
  const EpsEnsemble ens = make_ensemble(p, spec, cfg.master_seed, cfg.realization_index);
  const std::size_t n = ens.size();
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(n_chunks);

  if (p.epsilon == 0.0) {
    // Resonant limit: ρ_n/|ε| = n₀ + g k Σ_{s≤n} R_s sin(φ₀ + sθ); average over φ₀ analytically.
    const auto atoms = qkr::prepare_atoms(spec, cfg.master_seed, cfg.realization_index);
    parallel_for(n_chunks, spec.threads, [&](std::size_t c) {
      auto& acc = partial[c];
      acc.assign(kicks + 1, 0.0);
      for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
        const double theta = drift(p, atoms[i].beta);
        const double n0 = static_cast<double>(atoms[i].n0);
        const double gk = atoms[i].kick_factor * p.k;
        std::complex<double> sum{};
        acc[0] += 0.5 * n0 * n0;
        for (std::size_t s = 1; s <= kicks; ++s) {
          sum += factors[s - 1] * std::polar(1.0, static_cast<double>(s) * theta);
          acc[s] += 0.5 * n0 * n0 + 0.25 * gk * gk * std::norm(sum);
        }
      }
    });
  } else {
    const double inv_eps2 = 1.0 / (p.epsilon * p.epsilon);
    const double s = sign_of(p.epsilon);
    const double kt = std::abs(p.epsilon) * p.k;
    parallel_for(n_chunks, spec.threads, [&](std::size_t c) {
      auto& acc = partial[c];
      acc.assign(kicks + 1, 0.0);
      for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
        double phi = ens.phi[i];
        double rho = ens.rho[i];
        const double d = drift(p, ens.beta[i]);
        const double g = ens.kick_factor[i];
        acc[0] += 0.5 * rho * rho * inv_eps2;
        for (std::size_t k = 0; k < kicks; ++k) {
          phi = wrap(phi + s * rho + d);
          rho += kt * factors[k] * g * std::sin(phi);
          acc[k + 1] += 0.5 * rho * rho * inv_eps2;
        }
      }
    });
  }

  std::vector<double> trace(kicks + 1, 0.0);
  for (const auto& acc : partial)
    for (std::size_t k = 0; k <= kicks; ++k) trace[k] += acc[k];
  for (double& e : trace) e /= static_cast<double>(n);
  return trace;
}

}  // namespace

qkr::EnsembleResult eps_energy(const EpsParams& p, int n_kicks, const qkr::EnsembleSpec& spec,
                               const noise::NoiseConfig& cfg, int n_realizations, ZeroEpsilon at_zero) {
  p.validate();
  spec.validate();
  require_amplitude_noise_only(cfg);
  if (n_kicks < 0) throw std::invalid_argument("kick count must be >= 0");
  if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
  if (p.epsilon == 0.0 && at_zero == ZeroEpsilon::reject)
    throw EpsilonZero("eps = 0: the map is degenerate; request the analytic resonant limit instead");

  std::vector<std::vector<double>> traces;
  for (int r = 0; r < n_realizations; ++r) {
    noise::NoiseConfig c = cfg;
    c.realization_index = cfg.realization_index + static_cast<std::uint64_t>(r);
    traces.push_back(realization_trace(p, n_kicks, spec, c));
  }

  const auto kicks = static_cast<std::size_t>(n_kicks);
  qkr::EnsembleResult out;
  out.energy.resize(kicks + 1);
  out.sem.resize(kicks + 1);
  std::vector<double> column(traces.size());
  for (std::size_t k = 0; k <= kicks; ++k) {
    for (std::size_t r = 0; r < traces.size(); ++r) column[r] = traces[r][k];
    const auto est = qkr::mean_and_sem(column);
    out.energy[k] = est.mean;
    out.sem[k] = est.sem;
  }
  for (const auto& t : traces) out.realization_energies.push_back(t.back());
  out.mean = out.energy.back();
  out.final_sem = out.sem.back();
  return out;
}

std::vector<PortraitPoint> phase_portrait(const EpsParams& p, const PortraitGrid& grid, int n_iters,
                                          const noise::NoiseConfig& cfg) {
  p.validate();
  require_amplitude_noise_only(cfg);
  if (grid.n_phi < 1 || grid.n_rho < 1) throw std::invalid_argument("portrait grid needs at least one point per axis");
  if (!(grid.rho_max >= grid.rho_min)) throw std::invalid_argument("portrait grid needs rho_max >= rho_min");
  if (n_iters < 0) throw std::invalid_argument("iteration count must be >= 0");

  std::vector<PortraitPoint> out;
  out.reserve(static_cast<std::size_t>(grid.n_phi) * static_cast<std::size_t>(grid.n_rho) *
              static_cast<std::size_t>(n_iters + 1));
  int id = 0;
  for (int b = 0; b < grid.n_rho; ++b) {
    const double rho0 =
        grid.n_rho == 1 ? grid.rho_min : grid.rho_min + (grid.rho_max - grid.rho_min) * b / (grid.n_rho - 1);
    for (int a = 0; a < grid.n_phi; ++a, ++id) {
      noise::NoiseConfig c = cfg;
      c.realization_index = cfg.realization_index + static_cast<std::uint64_t>(id);
      const auto realization = noise::sample_realization(c, n_iters, 1);
      const auto factors = realization.amplitude_factors();
      PhasePoint s{kTwoPi * a / grid.n_phi, rho0};
      out.push_back({s.phi, s.rho, id});
      for (int n = 0; n < n_iters; ++n) {
        s = eps_step(s, p, factors[static_cast<std::size_t>(n)]);
        out.push_back({s.phi, s.rho, id});
      }
    }
  }
  return out;
}

double least_squares_slope(std::span<const double> y) {
  const auto n = static_cast<double>(y.size());
  if (y.size() < 2) return 0.0;
  const double xm = 0.5 * (n - 1.0);
  double ym = 0.0;
  for (double v : y) ym += v;
  ym /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - xm;
    sxy += dx * (y[i] - ym);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ClassicalEnergy classical_map_energy(double kappa, double hbar, int n_kicks, const ClassicalEnsemble& ens,
                                     const noise::NoiseConfig& cfg) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  if (n_kicks < 0) throw std::invalid_argument("kick count must be >= 0");
  if (ens.trajectories < 1 || ens.trajectories_per_realization < 1)
    throw std::invalid_argument("classical ensemble needs at least one trajectory per realization");
  if (!(ens.rho_width >= 0.0)) throw std::invalid_argument("rho_width must be >= 0");
  cfg.validate();

  const auto kicks = static_cast<std::size_t>(n_kicks);
  const auto per = static_cast<std::size_t>(ens.trajectories_per_realization);
  const auto total = static_cast<std::size_t>(ens.trajectories);
  const std::size_t groups = (total + per - 1) / per;
  std::vector<std::vector<double>> partial(groups);

  parallel_for(groups, ens.threads, [&](std::size_t g) {
    noise::NoiseConfig c = cfg;
    c.realization_index = cfg.realization_index + g;
    const auto realization = noise::sample_realization(c, n_kicks, 0);
    const auto factors = realization.amplitude_factors();
    const auto intervals = noise::free_evolution_intervals(realization.period_offsets());
    const CounterRng phase(c.master_seed, c.realization_index, Stream::initial_phase);
    const CounterRng momentum(c.master_seed, c.realization_index, Stream::initial_rho);
    auto& acc = partial[g];
    acc.assign(kicks + 1, 0.0);
    for (std::size_t t = 0; t < std::min(per, total - g * per); ++t) {
      double phi = phase.uniform(0.0, kTwoPi, t);
      const double rho0 = momentum.uniform(0.0, ens.rho_width, t);
      double rho = rho0;
      for (std::size_t n = 0; n < kicks; ++n) {
        // The first kick follows one nominal period of free flight.
        phi += rho * (n == 0 ? 1.0 : intervals[n - 1]);
        rho += kappa * factors[n] * std::sin(phi);
        const double d = rho - rho0;
        acc[n + 1] += d * d;
      }
    }
  });

  ClassicalEnergy out;
  out.energy.assign(kicks + 1, 0.0);
  for (const auto& acc : partial)
    for (std::size_t n = 0; n <= kicks; ++n) out.energy[n] += acc[n];
  for (double& e : out.energy) e /= 2.0 * hbar * hbar * static_cast<double>(total);
  out.slope = least_squares_slope(out.energy);
  return out;
}

}  // namespace aokr::epsmap
