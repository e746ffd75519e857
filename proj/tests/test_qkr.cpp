#include <doctest.h>

#include <cmath>
#include <complex>

#include "aokr/bessel.hpp"
#include "aokr/error.hpp"
#include "aokr/qkr.hpp"
#include "aokr/rng.hpp"

using namespace aokr;
using namespace aokr::qkr;

namespace {

QuantumState random_state(int cutoff, int width, std::uint64_t seed, double beta = 0.3) {
  QuantumState s(cutoff, 0, beta);
  const CounterRng rng(seed, 0, Stream::initial_phase);
  double norm = 0.0;
  for (int n = -width; n <= width; ++n) {
    const complex c(rng.normal(static_cast<std::uint64_t>(n + width), 0), rng.normal(static_cast<std::uint64_t>(n + width), 1));
    s.set_amplitude(n, c);
    norm += std::norm(c);
  }
  for (int n = -width; n <= width; ++n) s.set_amplitude(n, s.amplitude(n) / std::sqrt(norm));
  return s;
}

noise::NoiseRealization quiet(int kicks, int atoms = 1) { return noise::sample_realization({}, kicks, atoms); }

}  // namespace

TEST_CASE("zero kick is the identity") {
  auto s = random_state(64, 10, 1);
  const auto before = std::vector<complex>(s.amplitudes().begin(), s.amplitudes().end());
  kick(s, 0.0, 1.0);
  for (std::size_t j = 0; j < before.size(); ++j) CHECK(s.amplitudes()[j] == before[j]);
}

TEST_CASE("one kick on a plane wave gives Bessel populations") {
  const double k = 3.77;
  for (auto method : {KickMethod::convolution, KickMethod::spectral}) {
    auto s = QuantumState::plane_wave(128, 0, 0.0);
    kick(s, k * kTwoPi, kTwoPi, method);
    double second = 0.0;
    for (int m = -40; m <= 40; ++m) {
      const double j = theory::bessel_j(m, k);
      CHECK(std::abs(std::norm(s.amplitude(m)) - j * j) < 1e-15);
      second += m * m * std::norm(s.amplitude(m));
    }
    CHECK(second == doctest::Approx(k * k / 2).epsilon(1e-12));
    // phase i^m J_m
    CHECK(std::abs(s.amplitude(1) - complex(0.0, theory::bessel_j(1, k))) < 1e-14);
    CHECK(std::abs(s.amplitude(-1) - complex(0.0, theory::bessel_j(1, k))) < 1e-14);
    CHECK(std::abs(s.amplitude(2) + complex(theory::bessel_j(2, k), 0.0)) < 1e-14);
  }
}

TEST_CASE("kicks are unitary") {
  auto s = random_state(256, 30, 2);
  for (int i = 0; i < 20; ++i) {
    const double before = s.norm();
    kick(s, 3.77, 1.0);
    CHECK(std::abs(s.norm() - before) < 1e-12);
    free_evolve(s, 1.0, 1.0);
  }
  CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("spectral and convolution kicks agree") {
  for (double k : {0.5, 3.77, 10.0}) {
    auto a = random_state(256, 40, 3);
    auto b = a;
    kick(a, k, 1.0, KickMethod::convolution);
    kick(b, k, 1.0, KickMethod::spectral);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a.amplitudes()[j] - b.amplitudes()[j]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("free evolution phases") {
  SUBCASE("hbar = 4 pi, beta = 0 is the identity") {
    auto s = random_state(64, 20, 4, 0.0);
    auto before = s;
    free_evolve(s, 1.0, 2 * kTwoPi);
    for (int n = -20; n <= 20; ++n) CHECK(std::abs(s.amplitude(n) - before.amplitude(n)) < 1e-12);
  }
  SUBCASE("hbar = 2 pi, beta = 0 alternates signs") {
    auto s = random_state(64, 20, 5, 0.0);
    auto before = s;
    free_evolve(s, 1.0, kTwoPi);
    for (int n = -20; n <= 20; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(s.amplitude(n) - sign * before.amplitude(n)) < 1e-12);
    }
  }
  SUBCASE("hbar = 2 pi, beta = 1/2 is a global phase") {
    auto s = random_state(64, 20, 6, 0.5);
    auto before = s;
    free_evolve(s, 1.0, kTwoPi);
    const complex phase = std::polar(1.0, -std::numbers::pi / 4);
    for (int n = -20; n <= 20; ++n) CHECK(std::abs(s.amplitude(n) - phase * before.amplitude(n)) < 1e-12);
  }
  auto s = random_state(16, 3, 7);
  CHECK_THROWS(free_evolve(s, 0.0, 1.0));
}

TEST_CASE("evolve_atom at resonance and antiresonance") {
  const double k = 3.77;
  SUBCASE("no kicks leaves the state alone") {
    const auto p = ScaledParams::from_k(kTwoPi, k, 0);
    auto s = QuantumState::plane_wave(64, 3, 0.25);
    const auto out = evolve_atom(s, p, quiet(0), 0);
    CHECK(out.amplitude(3) == complex(1.0, 0.0));
    CHECK(out.energy() == s.energy());
  }
  SUBCASE("antiresonance returns every second kick") {
    const auto p = ScaledParams::from_k(kTwoPi, k, 12);
    auto s = QuantumState::plane_wave(512, 0, 0.0);
    const double e0 = s.energy();
    int checked = 0;
    evolve_atom(s, p, quiet(12), 0, KickMethod::convolution, [&](int n, const QuantumState& st) {
      if (n % 2 == 0) {
        CHECK(std::abs(st.energy() - e0) < 1e-8);
        ++checked;
      }
    });
    CHECK(checked == 6);
  }
  SUBCASE("resonance grows ballistically") {
    const auto p = ScaledParams::from_k(kTwoPi, k, 10);
    auto s = QuantumState::plane_wave(512, 0, 0.5);
    const double e0 = s.energy();
    evolve_atom(s, p, quiet(10), 0, KickMethod::convolution, [&](int n, const QuantumState& st) {
      CHECK((st.energy() - e0) == doctest::Approx(k * k * n * n / 4).epsilon(1e-6));
    });
  }
}

TEST_CASE("translation symmetry on resonance") {
  for (double hbar : {kTwoPi, 2 * kTwoPi}) {
    for (double beta : {0.0, 0.5, 0.3}) {
      const auto p = ScaledParams::from_k(hbar, 2.1, 8);
      const auto a = evolve_atom(QuantumState::plane_wave(256, 0, beta), p, quiet(8), 0);
      const auto b = evolve_atom(QuantumState::plane_wave(256, 1, beta), p, quiet(8), 0);
      for (int n = -60; n <= 60; ++n) CHECK(std::abs(std::norm(a.amplitude(n)) - std::norm(b.amplitude(n + 1))) < 1e-12);
    }
  }
}

TEST_CASE("short ladders are reported") {
  const auto p = ScaledParams::from_k(kTwoPi, 3.77, 20);
  CHECK_THROWS_AS(evolve_atom(QuantumState::plane_wave(32, 0, 0.5), p, quiet(20), 0), CutoffInsufficient);
  auto s = evolve_atom(QuantumState::plane_wave(512, 0, 0.5), p, quiet(20), 0);
  CHECK(s.tail_mass() < kTailMassLimit);
}

TEST_CASE("reshuffle keeps the momentum within half a recoil") {
  auto s = QuantumState::plane_wave(16, 4, 0.9);
  s.reshuffle(0.05);
  CHECK(s.beta() == 0.05);
  CHECK(s.norm() == 1.0);
  CHECK(std::abs(s.mean_momentum() - 4.9) <= 0.5);
  s.reshuffle(0.95);
  CHECK(std::abs(s.mean_momentum() - 4.9) <= 0.5);
  CHECK_THROWS(s.reshuffle(1.0));
}

TEST_CASE("spontaneous emission keeps the norm") {
  noise::NoiseConfig cfg;
  cfg.se_probability = 0.5;
  cfg.master_seed = 8;
  const auto r = noise::sample_realization(cfg, 20, 4);
  const auto p = ScaledParams::from_k(kTwoPi, 3.0, 20);
  for (std::size_t atom = 0; atom < 4; ++atom) {
    double start_beta = 0.5;
    auto out = evolve_atom(QuantumState::plane_wave(512, 0, start_beta), p, r, atom, KickMethod::convolution,
                           [&](int, const QuantumState& st) { CHECK(std::abs(st.norm() - 1.0) < 1e-12); });
    CHECK(out.beta() != start_beta);
  }
}

TEST_CASE("atom preparation") {
  EnsembleSpec spec;
  spec.n_atoms = 2000;
  spec.beta_mode = BetaMode::uniform;
  spec.kappa_spread = 0.8;
  const auto atoms = prepare_atoms(spec, 1, 0);
  REQUIRE(atoms.size() == 2000);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    CHECK(atoms[i].beta >= i / 2000.0);
    CHECK(atoms[i].beta < (i + 1) / 2000.0);
    CHECK(atoms[i].kick_factor > 0.0);
  }
  spec.beta_mode = BetaMode::from_momentum;
  spec.kappa_spread = 0.0;
  spec.momenta = {1.25, -0.75, 3.0};
  const auto fixed = prepare_atoms(spec, 1, 0);
  CHECK(fixed[0].n0 == 1);
  CHECK(fixed[0].beta == 0.25);
  CHECK(fixed[1].n0 == -1);
  CHECK(fixed[1].beta == 0.25);
  CHECK(fixed[2].n0 == 3);
  CHECK(fixed[3].n0 == 1);
  CHECK(fixed[0].kick_factor == 1.0);

  spec.n_atoms = 0;
  CHECK_THROWS(prepare_atoms(spec, 1, 0));
}

TEST_CASE("unkicked ensemble keeps its thermal energy") {
  EnsembleSpec spec;
  spec.n_atoms = 20000;
  const auto p = ScaledParams::from_k(kTwoPi, 0.0, 5);
  const auto e = ensemble_energy(spec, p, {}, 1);
  CHECK(e.mean == doctest::Approx(3.125).epsilon(0.03));
}

TEST_CASE("ensemble results do not depend on the thread count") {
  EnsembleSpec spec;
  spec.n_atoms = 300;
  noise::NoiseConfig cfg;
  cfg.amplitude_level = 1.0;
  cfg.se_probability = 0.025;
  cfg.master_seed = 11;
  const auto p = ScaledParams::from_k(6.1, 3.77, 10);
  spec.threads = 1;
  const auto a = simulate_realization(spec, p, cfg, 0.29);
  spec.threads = 4;
  const auto b = simulate_realization(spec, p, cfg, 0.29);
  for (std::size_t i = 0; i < a.energy.size(); ++i) CHECK(a.energy[i] == b.energy[i]);
  CHECK(a.atom_sem == b.atom_sem);
  REQUIRE(a.distribution);
  double total = 0.0;
  for (double w : a.distribution->probability) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.distribution->probability == b.distribution->probability);
}

TEST_CASE("weak amplitude noise converges to the noiseless energy") {
  EnsembleSpec spec;
  spec.n_atoms = 1000;
  const auto p = ScaledParams::from_k(6.0, 3.77, 20);
  noise::NoiseConfig cfg;
  cfg.master_seed = 21;
  // Same realization index, so the atoms match and only the kicks differ.
  const double clean = ensemble_energy(spec, p, cfg, 1).mean;
  cfg.amplitude_level = 0.01;
  const double noisy = ensemble_energy(spec, p, cfg, 1).mean;
  CHECK(std::abs(noisy - clean) / clean < 0.01);
}

TEST_CASE("detection window discards fast atoms") {
  EnsembleSpec spec;
  spec.n_atoms = 200;
  const auto p = ScaledParams::from_k(kTwoPi, 3.77, 10);
  const double open = ensemble_energy(spec, p, {}, 1).mean;
  spec.detection_window = 1e9;
  CHECK(ensemble_energy(spec, p, {}, 1).mean == open);
  spec.detection_window = 10.0;
  const double narrow = ensemble_energy(spec, p, {}, 1).mean;
  CHECK(narrow < open);
  CHECK(narrow <= 50.0);
}

TEST_CASE("sample statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = mean_and_sem(v);
  CHECK(e.mean == 2.5);
  CHECK(e.sem == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(mean_and_sem(std::vector<double>{7.0}).sem == 0.0);
}
