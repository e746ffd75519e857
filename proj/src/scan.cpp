#include "aokr/scan.hpp"

#include <cmath>
#include <sstream>

#include "aokr/error.hpp"
#include "aokr/rng.hpp"
#include "aokr/theory.hpp"

namespace aokr::cli {
namespace {

qkr::EnsembleSpec ensemble_of(const ScanSpec& s) {
  qkr::EnsembleSpec e;
  e.n_atoms = s.atoms;
  e.sigma_p = s.sigma_p;
  e.beta_mode = s.beta_mode;
  e.beta = s.beta;
  e.kappa_spread = s.kappa_spread;
  e.detection_window = s.detection_window;
  e.cutoff = s.cutoff;
  e.kick_method = s.kick_method;
  e.threads = s.threads;
  return e;
}

noise::NoiseConfig noise_of(const ScanSpec& s, double level, std::uint64_t master) {
  noise::NoiseConfig c;
  if (s.noise == NoiseKind::amplitude)
    c.amplitude_level = level;
  else
    c.period_level = level;
  c.se_probability = s.se_probability;
  c.master_seed = master;
  c.period_quantum = s.period_quantum;
  return c;
}

std::string describe(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string EnergyCurve::quantity() const { return spec.engine == Engine::theory ? "D" : "E"; }

std::uint64_t point_seed(std::uint64_t seed, std::size_t point, std::size_t level) {
  return combine(combine(seed, point), level);
}

EnergyCurve run_scan(const ScanSpec& spec, bool distributions, const ProgressFn& progress) {
  spec.validate();
  EnergyCurve out;
  out.spec = spec;
  out.abscissa = spec.points();
  out.levels = spec.levels;
  for (double x : out.abscissa) out.hbar.push_back(spec.hbar_at(x));

  const std::size_t n_points = out.abscissa.size();
  out.energy.assign(out.levels.size(), std::vector<double>(n_points, 0.0));
  out.sem.assign(out.levels.size(), std::vector<double>(n_points, 0.0));
  out.seeds.assign(out.levels.size(), std::vector<std::uint64_t>(n_points, 0));

  const auto ensemble = ensemble_of(spec);
  for (std::size_t l = 0; l < out.levels.size(); ++l) {
    const double level = out.levels[l];
    const int realizations = spec.realizations_for(level);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double hbar = out.hbar[i];
      const std::uint64_t master = point_seed(spec.seed, i, l);
      out.seeds[l][i] = master;
      const auto cfg = noise_of(spec, level, master);
      double e = 0.0;
      double sem = 0.0;
      switch (spec.engine) {
        case Engine::quantum: {
          const auto params = ScaledParams::from_k(hbar, spec.k, spec.kicks);
          const auto r =
              qkr::simulate_ensemble(ensemble, params, cfg, realizations, distributions ? spec.histogram_bin : 0.0);
          e = r.mean;
          sem = r.final_sem;
          if (r.distribution) out.distributions.push_back({l, i, *r.distribution});
          break;
        }
        case Engine::eps_classical: {
          epsmap::EpsParams p;
          p.epsilon = hbar - kTwoPi * spec.resonance_order;
          if (std::abs(p.epsilon) < 1e-12) p.epsilon = 0.0;
          p.k = spec.k;
          p.m = spec.resonance_order;
          if (p.beyond_validity() && progress)
            progress("warning: |eps| = " + describe(std::abs(p.epsilon)) +
                     " > 0.5, the epsilon-classical map is outside its range of validity");
          const auto r = epsmap::eps_energy(p, spec.kicks, ensemble, cfg, realizations, epsmap::ZeroEpsilon::analytic);
          e = r.mean;
          sem = r.final_sem;
          break;
        }
        case Engine::theory: {
          theory::DiffusionInputs in;
          in.kappa = spec.k * hbar;
          in.hbar = hbar;
          in.regime = theory::Regime::quantum;
          in.amplitude_level = level;
          e = theory::diffusion_rate_with_noise(in);
          break;
        }
      }
      out.energy[l][i] = e;
      out.sem[l][i] = sem;
      if (progress)
        progress("level " + describe(level) + " point " + std::to_string(i + 1) + "/" + std::to_string(n_points) +
                 " hbar=" + describe(hbar) + " " + out.quantity() + "=" + describe(e) + " sem=" + describe(sem));
    }
  }
  return out;
}

nlohmann::json PortraitSpec::to_json() const {
  return {
      {"epsilon", params.epsilon},
      {"k", params.k},
      {"l", params.l},
      {"m", params.m},
      {"beta", params.beta},
      {"amplitude_level", amplitude_level},
      {"grid", {{"n_phi", grid.n_phi}, {"n_rho", grid.n_rho}, {"rho_min", grid.rho_min}, {"rho_max", grid.rho_max}}},
      {"iters", iters},
      {"seed", seed},
  };
}

std::vector<epsmap::PortraitPoint> run_portrait(const PortraitSpec& spec) {
  noise::NoiseConfig cfg;
  cfg.amplitude_level = spec.amplitude_level;
  cfg.master_seed = spec.seed;
  return epsmap::phase_portrait(spec.params, spec.grid, spec.iters, cfg);
}

}  // namespace aokr::cli
