#include "aokr/qkr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "aokr/bessel.hpp"
#include "aokr/error.hpp"
#include "aokr/parallel.hpp"
#include "aokr/rng.hpp"
#include "spectral_kick.hpp"

namespace aokr::qkr {
namespace {

// Edge sites below this probability are zeroed and dropped from the band.
constexpr double kNegligibleProbability = 1e-34;
// Kernel terms with |J_m| below this are dropped.
constexpr double kKernelCutoff = 1e-18;
constexpr std::size_t kAtomsPerChunk = 32;

struct Kernel {
  double k = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> bessel;  // J_0 … J_W
};

const Kernel& kernel_for(double k_eff) {
  thread_local Kernel cache;
  if (cache.k == k_eff) return cache;
  const double ak = std::abs(k_eff);
  const int reach = static_cast<int>(ak) + 20 + static_cast<int>(6.0 * std::cbrt(ak + 1.0));
  auto j = theory::bessel_j_sequence(reach, k_eff);
  std::size_t width = j.size();
  while (width > 1 && std::abs(j[width - 1]) < kKernelCutoff) --width;
  j.resize(width);
  cache.k = k_eff;
  cache.bessel = std::move(j);
  return cache;
}

// out[n] += a_m in[n − m], with a_m = i^m J_{|m|} (a_{−m} = a_m).
void convolve(std::span<const complex> in, std::size_t lo, std::size_t hi, std::span<complex> out,
              const std::vector<double>& bessel) {
  const auto* src = reinterpret_cast<const double*>(in.data());
  auto* dst = reinterpret_cast<double*>(out.data());
  const auto size = static_cast<long>(in.size());
  const auto width = static_cast<long>(bessel.size());
  for (long m = -(width - 1); m < width; ++m) {
    const long am = m < 0 ? -m : m;
    const double jm = bessel[static_cast<std::size_t>(am)];
    const int quarter = static_cast<int>(am % 4);
    const double s = (quarter == 0 || quarter == 1) ? jm : -jm;
    const long begin = std::max<long>(static_cast<long>(lo) + m, 0);
    const long end = std::min<long>(static_cast<long>(hi) + m, size);
    if (begin >= end) continue;
    const double* from = src + 2 * (begin - m);
    double* to = dst + 2 * begin;
    const long count = end - begin;
    if (quarter % 2 == 0) {
      for (long i = 0; i < 2 * count; ++i) to[i] += s * from[i];
    } else {
      for (long i = 0; i < count; ++i) {
        const double re = from[2 * i];
        const double im = from[2 * i + 1];
        to[2 * i] -= s * im;
        to[2 * i + 1] += s * re;
      }
    }
  }
}

void check_tail(const QuantumState& state) {
  const double tail = state.tail_mass();
  if (tail >= kTailMassLimit) {
    throw CutoffInsufficient("ladder cutoff M = " + std::to_string(state.cutoff()) +
                             " too small: tail probability " + std::to_string(tail) + " exceeds " +
                             std::to_string(kTailMassLimit));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(int cutoff, long center, double beta, double kick_factor)
    : cutoff_(cutoff), center_(center), beta_(beta), kick_factor_(kick_factor) {
  if (cutoff < 1) throw std::invalid_argument("ladder cutoff must be >= 1");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("quasimomentum must lie in [0,1)");
  if (!(kick_factor > 0.0)) throw std::invalid_argument("kick factor must be > 0");
  amps_.assign(2 * static_cast<std::size_t>(cutoff) + 1, complex{});
}

QuantumState QuantumState::plane_wave(int cutoff, long n0, double beta, double kick_factor) {
  QuantumState s(cutoff, n0, beta, kick_factor);
  s.set_amplitude(n0, 1.0);
  return s;
}

complex QuantumState::amplitude(long n) const {
  const long j = n - center_ + cutoff_;
  if (j < 0 || j >= static_cast<long>(amps_.size())) return {};
  return amps_[static_cast<std::size_t>(j)];
}

void QuantumState::set_amplitude(long n, complex value) {
  const long j = n - center_ + cutoff_;
  if (j < 0 || j >= static_cast<long>(amps_.size()))
    throw std::out_of_range("momentum index " + std::to_string(n) + " outside the ladder");
  const auto sj = static_cast<std::size_t>(j);
  amps_[sj] = value;
  if (value != complex{}) {
    if (lo_ == hi_) {
      lo_ = sj;
      hi_ = sj + 1;
    } else {
      lo_ = std::min(lo_, sj);
      hi_ = std::max(hi_, sj + 1);
    }
  }
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (std::size_t j = lo_; j < hi_; ++j) sum += std::norm(amps_[j]);
  return sum;
}

double QuantumState::energy() const {
  double sum = 0.0;
  for (std::size_t j = lo_; j < hi_; ++j) {
    const double p = static_cast<double>(index_at(j)) + beta_;
    sum += std::norm(amps_[j]) * p * p;
  }
  return 0.5 * sum;
}

double QuantumState::mean_momentum() const {
  double sum = 0.0;
  for (std::size_t j = lo_; j < hi_; ++j) sum += std::norm(amps_[j]) * (static_cast<double>(index_at(j)) + beta_);
  return sum;
}

double QuantumState::tail_mass() const {
  const long limit = (9L * cutoff_) / 10;
  double sum = 0.0;
  for (std::size_t j = lo_; j < hi_; ++j) {
    const long offset = static_cast<long>(j) - cutoff_;
    if (offset > limit || offset < -limit) sum += std::norm(amps_[j]);
  }
  return sum;
}

void QuantumState::reshuffle(double new_beta) {
  if (!(new_beta >= 0.0 && new_beta < 1.0)) throw std::invalid_argument("quasimomentum must lie in [0,1)");
  // n + β' with n shifted by s = round(β − β') stays within half a recoil of n + β.
  center_ += std::lround(beta_ - new_beta);
  beta_ = new_beta;
}

void QuantumState::set_support(std::size_t begin, std::size_t end) {
  lo_ = std::min(begin, amps_.size());
  hi_ = std::clamp(end, lo_, amps_.size());
  while (lo_ < hi_ && std::norm(amps_[lo_]) < kNegligibleProbability) amps_[lo_++] = {};
  while (hi_ > lo_ && std::norm(amps_[hi_ - 1]) < kNegligibleProbability) amps_[--hi_] = {};
}

// ---------------------------------------------------------------------------
// Propagators

void kick(QuantumState& state, double kappa_n, double hbar, KickMethod method) {
  if (!(kappa_n >= 0.0)) throw std::invalid_argument("kick strength must be >= 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  const double k_eff = state.kick_factor() * kappa_n / hbar;
  if (k_eff == 0.0 || state.support_begin() == state.support_end()) return;

  auto amps = state.mutable_amplitudes();
  if (method == KickMethod::spectral) {
    const auto& bessel = kernel_for(k_eff).bessel;
    detail::spectral_kick(amps, k_eff, amps.size() + 2 * bessel.size());
    state.set_support(0, amps.size());
  } else {
    const auto& bessel = kernel_for(k_eff).bessel;
    const std::size_t lo = state.support_begin();
    const std::size_t hi = state.support_end();
    const std::size_t reach = bessel.size() - 1;
    const std::size_t out_lo = lo > reach ? lo - reach : 0;
    const std::size_t out_hi = std::min(hi + reach, amps.size());

    thread_local std::vector<complex> scratch;
    scratch.assign(amps.size(), complex{});
    convolve(amps, lo, hi, scratch, bessel);
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(out_lo), scratch.begin() + static_cast<std::ptrdiff_t>(out_hi),
              amps.begin() + static_cast<std::ptrdiff_t>(out_lo));
    state.set_support(out_lo, out_hi);
  }
  check_tail(state);
}

void free_evolve(QuantumState& state, double dtau, double hbar) {
  if (!(dtau > 0.0)) throw std::invalid_argument("free evolution time must be > 0");
  const double a = 0.5 * hbar * dtau;
  const double beta = state.beta();
  auto amps = state.mutable_amplitudes();
  for (std::size_t j = state.support_begin(); j < state.support_end(); ++j) {
    const double p = static_cast<double>(state.index_at(j)) + beta;
    amps[j] *= std::polar(1.0, -a * p * p);
  }
}

namespace {

QuantumState evolve_with_intervals(QuantumState state, const ScaledParams& params,
                                   const noise::NoiseRealization& realization, std::span<const double> intervals,
                                   std::size_t atom, KickMethod method, const KickObserver& observer) {
  const auto factors = realization.amplitude_factors();
  for (int n = 0; n < params.kicks; ++n) {
    const auto i = static_cast<std::size_t>(n);
    kick(state, params.kappa * factors[i], params.hbar, method);
    if (realization.spontaneous_emission(atom, i)) state.reshuffle(realization.reshuffled_beta(atom, i));
    if (observer) observer(n + 1, state);
    if (n + 1 < params.kicks) free_evolve(state, intervals[i], params.hbar);
  }
  return state;
}

void require_length(const ScaledParams& params, const noise::NoiseRealization& realization) {
  params.validate();
  if (realization.kicks() < static_cast<std::size_t>(params.kicks)) {
    throw std::invalid_argument("noise realization covers " + std::to_string(realization.kicks()) +
                                " kicks, simulation needs " + std::to_string(params.kicks));
  }
}

}  // namespace

QuantumState evolve_atom(QuantumState initial, const ScaledParams& params, const noise::NoiseRealization& realization,
                         std::size_t atom_index, KickMethod method, const KickObserver& observer) {
  require_length(params, realization);
  const auto intervals = noise::free_evolution_intervals(realization.period_offsets());
  return evolve_with_intervals(std::move(initial), params, realization, intervals, atom_index, method, observer);
}

// ---------------------------------------------------------------------------
// Ensembles

void EnsembleSpec::validate() const {
  if (n_atoms < 1) throw std::invalid_argument("ensemble needs at least one atom");
  if (!(sigma_p >= 0.0)) throw std::invalid_argument("sigma_p must be >= 0");
  if (!(kappa_spread >= 0.0)) throw std::invalid_argument("kappa_spread must be >= 0");
  if (!(detection_window > 0.0)) throw std::invalid_argument("detection window must be > 0");
  if (cutoff < 1) throw std::invalid_argument("ladder cutoff must be >= 1");
  if (beta_mode == BetaMode::fixed && !(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("fixed quasimomentum must lie in [0,1)");
}

std::vector<AtomSeed> prepare_atoms(const EnsembleSpec& spec, std::uint64_t master_seed,
                                    std::uint64_t realization_index) {
  spec.validate();
  const CounterRng momentum_rng(master_seed, realization_index, Stream::initial_momentum);
  const CounterRng beta_rng(master_seed, realization_index, Stream::initial_beta);
  const CounterRng spread_rng(master_seed, realization_index, Stream::kappa_spread);

  std::vector<AtomSeed> atoms(static_cast<std::size_t>(spec.n_atoms));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double p = spec.momenta.empty() ? spec.sigma_p * momentum_rng.normal(i) : spec.momenta[i % spec.momenta.size()];
    AtomSeed& a = atoms[i];
    switch (spec.beta_mode) {
      case BetaMode::from_momentum: {
        const double floor_p = std::floor(p);
        a.n0 = static_cast<long>(floor_p);
        a.beta = p - floor_p;
        if (a.beta >= 1.0) {  // p just below an integer
          a.beta = 0.0;
          a.n0 += 1;
        }
        break;
      }
      case BetaMode::fixed:
        a.beta = spec.beta;
        a.n0 = std::lround(p - a.beta);
        break;
      case BetaMode::uniform:
        a.beta = (static_cast<double>(i) + beta_rng.uniform(i)) / static_cast<double>(atoms.size());
        a.n0 = std::lround(p - a.beta);
        break;
    }
    a.kick_factor = 1.0;
    if (spec.kappa_spread > 0.0) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        const double g = 1.0 + spec.kappa_spread * spread_rng.normal(i, attempt);
        if (g > 0.0) {
          a.kick_factor = g;
          break;
        }
      }
    }
  }
  return atoms;
}

EnergyEstimate mean_and_sem(std::span<const double> values) {
  EnergyEstimate out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double n = static_cast<double>(values.size());
  out.sem = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

namespace {

struct ChunkTally {
  std::vector<double> mass;    // in-window probability per kick
  std::vector<double> second;  // in-window Σ p² per kick
  double final_sum = 0.0;      // Σ per-atom final energies
  double final_sum_sq = 0.0;
  std::map<long, double> histogram;
};

void tally(const QuantumState& s, double window, double& mass, double& second) {
  const auto amps = s.amplitudes();
  for (std::size_t j = s.support_begin(); j < s.support_end(); ++j) {
    const double p = static_cast<double>(s.index_at(j)) + s.beta();
    if (std::abs(p) > window) continue;
    const double w = std::norm(amps[j]);
    mass += w;
    second += w * p * p;
  }
}

}  // namespace

RealizationResult simulate_realization(const EnsembleSpec& spec, const ScaledParams& params,
                                       const noise::NoiseConfig& cfg, double histogram_bin) {
  spec.validate();
  params.validate();
  const auto realization = noise::sample_realization(cfg, params.kicks, spec.n_atoms);
  const auto intervals = noise::free_evolution_intervals(realization.period_offsets());
  const auto atoms = prepare_atoms(spec, cfg.master_seed, cfg.realization_index);
  const auto kicks = static_cast<std::size_t>(params.kicks);
  const double window = spec.detection_window;

  const std::size_t n_chunks = (atoms.size() + kAtomsPerChunk - 1) / kAtomsPerChunk;
  std::vector<ChunkTally> chunks(n_chunks);
  parallel_for(n_chunks, spec.threads, [&](std::size_t c) {
    ChunkTally& t = chunks[c];
    t.mass.assign(kicks + 1, 0.0);
    t.second.assign(kicks + 1, 0.0);
    const std::size_t end = std::min(atoms.size(), (c + 1) * kAtomsPerChunk);
    for (std::size_t a = c * kAtomsPerChunk; a < end; ++a) {
      auto state = QuantumState::plane_wave(spec.cutoff, atoms[a].n0, atoms[a].beta, atoms[a].kick_factor);
      tally(state, window, t.mass[0], t.second[0]);
      state = evolve_with_intervals(std::move(state), params, realization, intervals, a, spec.kick_method,
                                    [&](int n, const QuantumState& s) {
                                      const auto i = static_cast<std::size_t>(n);
                                      tally(s, window, t.mass[i], t.second[i]);
                                    });
      double m = 0.0;
      double q = 0.0;
      tally(state, window, m, q);
      const double e = m > 0.0 ? 0.5 * q / m : 0.0;
      t.final_sum += e;
      t.final_sum_sq += e * e;
      if (histogram_bin > 0.0) {
        const auto amps = state.amplitudes();
        for (std::size_t j = state.support_begin(); j < state.support_end(); ++j) {
          const double p = static_cast<double>(state.index_at(j)) + state.beta();
          t.histogram[std::lround(p / histogram_bin)] += std::norm(amps[j]);
        }
      }
    }
  });

  RealizationResult out;
  std::vector<double> mass(kicks + 1, 0.0);
  std::vector<double> second(kicks + 1, 0.0);
  double fs = 0.0;
  double fss = 0.0;
  std::map<long, double> histogram;
  for (const auto& t : chunks) {
    for (std::size_t i = 0; i <= kicks; ++i) {
      mass[i] += t.mass[i];
      second[i] += t.second[i];
    }
    fs += t.final_sum;
    fss += t.final_sum_sq;
    for (const auto& [bin, w] : t.histogram) histogram[bin] += w;
  }
  out.energy.resize(kicks + 1);
  for (std::size_t i = 0; i <= kicks; ++i) out.energy[i] = mass[i] > 0.0 ? 0.5 * second[i] / mass[i] : 0.0;

  const double n = static_cast<double>(atoms.size());
  if (atoms.size() > 1) {
    const double mean = fs / n;
    const double var = std::max(0.0, (fss - n * mean * mean) / (n - 1.0));
    out.atom_sem = std::sqrt(var / n);
  }
  if (histogram_bin > 0.0) {
    MomentumDistribution d;
    d.bin_width = histogram_bin;
    d.mean_energy = out.energy.back();
    d.sem = out.atom_sem;
    for (const auto& [bin, w] : histogram) {
      d.momentum.push_back(static_cast<double>(bin) * histogram_bin);
      d.probability.push_back(w / n);
    }
    out.distribution = std::move(d);
  }
  return out;
}

EnsembleResult simulate_ensemble(const EnsembleSpec& spec, const ScaledParams& params, const noise::NoiseConfig& cfg,
                                 int n_realizations, double histogram_bin) {
  if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
  std::vector<RealizationResult> runs;
  runs.reserve(static_cast<std::size_t>(n_realizations));
  for (int r = 0; r < n_realizations; ++r) {
    noise::NoiseConfig c = cfg;
    c.realization_index = cfg.realization_index + static_cast<std::uint64_t>(r);
    runs.push_back(simulate_realization(spec, params, c, histogram_bin));
  }

  const auto kicks = static_cast<std::size_t>(params.kicks);
  EnsembleResult out;
  out.energy.resize(kicks + 1);
  out.sem.resize(kicks + 1);
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i <= kicks; ++i) {
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r].energy[i];
    const auto est = mean_and_sem(column);
    out.energy[i] = est.mean;
    out.sem[i] = est.sem;
  }
  if (runs.size() == 1) out.sem.back() = runs.front().atom_sem;
  for (const auto& run : runs) out.realization_energies.push_back(run.energy.back());
  out.mean = out.energy.back();
  out.final_sem = out.sem.back();

  if (histogram_bin > 0.0) {
    std::map<double, double> merged;
    for (const auto& run : runs)
      for (std::size_t b = 0; b < run.distribution->momentum.size(); ++b)
        merged[run.distribution->momentum[b]] += run.distribution->probability[b] / static_cast<double>(runs.size());
    MomentumDistribution d;
    d.bin_width = histogram_bin;
    d.mean_energy = out.mean;
    d.sem = out.final_sem;
    for (const auto& [p, w] : merged) {
      d.momentum.push_back(p);
      d.probability.push_back(w);
    }
    out.distribution = std::move(d);
  }
  return out;
}

EnergyEstimate ensemble_energy(const EnsembleSpec& spec, const ScaledParams& params, const noise::NoiseConfig& cfg,
                               int n_realizations) {
  const auto result = simulate_ensemble(spec, params, cfg, n_realizations);
  return {result.mean, result.final_sem};
}

}  // namespace aokr::qkr
