#include <doctest.h>

#include <cmath>

#include "aokr/core.hpp"
#include "aokr/error.hpp"

using namespace aokr;

TEST_CASE("effective potential") {
  CHECK(effective_potential(0.0, 2e9) == 0.0);
  CHECK(effective_potential(2e8, 2e9) == doctest::Approx(2e7).epsilon(1e-15));
  // quadratic in Ω
  CHECK(effective_potential(1e8, 2e9) * 4.0 == doctest::Approx(effective_potential(2e8, 2e9)).epsilon(1e-15));
  // Δ = 5Ω breaks the large-detuning condition even though Ω²/Δ is finite.
  CHECK_THROWS_AS(effective_potential(4e8, 2e9), DetuningTooSmall);
  CHECK_THROWS_AS(effective_potential(3e8, 2e9), DetuningTooSmall);
  CHECK_THROWS_AS(effective_potential(1.0, 0.0), DetuningTooSmall);
  CHECK_NOTHROW(effective_potential(2e8, 2e9));  // exactly 10x
}

TEST_CASE("scaled parameters from the lab") {
  LabParams lab;
  lab.kick_period = 60.5e-6;
  CHECK(scale_params(lab).hbar == doctest::Approx(kTwoPi).epsilon(1e-14));
  lab.kick_period = 121e-6;
  CHECK(scale_params(lab).hbar == doctest::Approx(2 * kTwoPi).epsilon(1e-14));

  lab.rabi_frequency = 2e8;
  lab.pulse_duration = 0.0;
  CHECK(scale_params(lab).kappa == 0.0);

  lab.pulse_duration = 320e-9;
  const auto a = scale_params(lab);
  CHECK(a.kappa == doctest::Approx(2e7 * lab.recoil_frequency * 121e-6 * 320e-9));
  lab.kick_period *= 2;
  const auto b = scale_params(lab);
  CHECK(b.hbar == doctest::Approx(2 * a.hbar));
  CHECK(b.kappa == doctest::Approx(2 * a.kappa));
  CHECK(scale_params(lab, 7).kicks == 7);

  lab.rabi_frequency = 5e8;
  CHECK_THROWS_AS(scale_params(lab), DetuningTooSmall);
  lab.rabi_frequency = 2e8;
  lab.kick_period = 0.0;
  CHECK_THROWS(scale_params(lab));
}

TEST_CASE("hbar and period conversions") {
  CHECK(hbar_from_period(0.0) == 0.0);
  CHECK(hbar_from_period(60.5e-6, 12982.0) == doctest::Approx(kTwoPi).epsilon(2e-4));
  CHECK(std::abs(hbar_from_period(60.5e-6, 12982.0) - kTwoPi) < 1e-3);
  CHECK(hbar_from_period(61e-6) == doctest::Approx(kTwoPi * 61.0 / 60.5).epsilon(1e-14));
  CHECK_THROWS(hbar_from_period(-1e-6));
  for (double t : {1e-6, 60.5e-6, 123.4e-6}) {
    CHECK(hbar_from_period(t) / (8.0 * kCaesiumRecoilFrequency) == doctest::Approx(t).epsilon(1e-15));
    CHECK(period_from_hbar(hbar_from_period(t)) == doctest::Approx(t).epsilon(1e-15));
  }
}

TEST_CASE("scaled parameter helpers") {
  const auto p = ScaledParams::from_k(kTwoPi, 3.77, 20);
  CHECK(p.k() == doctest::Approx(3.77).epsilon(1e-15));
  CHECK(p.kicks == 20);
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS(ScaledParams{0.0, 1.0, 1}.validate());
  CHECK_THROWS(ScaledParams{1.0, -1.0, 1}.validate());
  CHECK_THROWS(ScaledParams{1.0, 1.0, -1}.validate());
}
