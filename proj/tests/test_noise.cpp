#include <doctest.h>

#include <cmath>
#include <vector>

#include "aokr/error.hpp"
#include "aokr/noise.hpp"

using namespace aokr;
using namespace aokr::noise;

TEST_CASE("zero noise is exact") {
  const auto r = sample_realization({}, 50, 3);
  for (double f : r.amplitude_factors()) CHECK(f == 1.0);
  for (double d : r.period_offsets()) CHECK(d == 0.0);
  for (double dt : free_evolution_intervals(r.period_offsets())) CHECK(dt == 1.0);
  CHECK_FALSE(r.spontaneous_emission(0, 0));
}

TEST_CASE("amplitude noise moments and support") {
  NoiseConfig cfg;
  cfg.amplitude_level = 2.0;
  cfg.master_seed = 17;
  const auto r = sample_realization(cfg, 200000, 0);
  double mean = 0.0;
  for (double f : r.amplitude_factors()) {
    REQUIRE(f >= 0.0);
    REQUIRE(f <= 2.0);
    mean += f;
  }
  mean /= 200000.0;
  double var = 0.0;
  for (double f : r.amplitude_factors()) var += (f - mean) * (f - mean);
  var /= 200000.0;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("period noise stays on its grid and does not accumulate") {
  NoiseConfig cfg;
  cfg.period_level = 0.1;
  cfg.master_seed = 3;
  const auto r = sample_realization(cfg, 10000, 0);
  CHECK(r.period_offsets()[0] == 0.0);
  for (double d : r.period_offsets()) CHECK(std::abs(d) <= 0.05);
  const auto iv = free_evolution_intervals(r.period_offsets());
  REQUIRE(iv.size() == 9999);
  double total = 0.0;
  for (double dt : iv) {
    CHECK(dt >= 0.9);
    CHECK(dt <= 1.1);
    total += dt;
  }
  CHECK(total == doctest::Approx(9999.0 + r.period_offsets().back()).epsilon(1e-12));

  cfg.period_quantum = 0.01;
  const auto q = sample_realization(cfg, 100, 0);
  for (double d : q.period_offsets()) CHECK(std::abs(d / 0.01 - std::round(d / 0.01)) < 1e-9);
}

TEST_CASE("interval arithmetic") {
  const std::vector<double> d{0.0, 0.05, -0.05};
  const auto iv = free_evolution_intervals(d);
  REQUIRE(iv.size() == 2);
  CHECK(iv[0] == doctest::Approx(1.05));
  CHECK(iv[1] == doctest::Approx(0.90));
  CHECK_THROWS_AS(free_evolution_intervals(std::vector<double>{0.0, -1.0}), NonpositiveInterval);
  CHECK(free_evolution_intervals(std::vector<double>{0.0}).empty());
}

TEST_CASE("level bounds") {
  NoiseConfig cfg;
  cfg.amplitude_level = 2.5;
  CHECK_THROWS_AS(sample_realization(cfg, 5, 1), InvalidNoiseLevel);
  cfg.amplitude_level = 0.0;
  cfg.period_level = 1.0;
  CHECK_THROWS_AS(sample_realization(cfg, 5, 1), InvalidNoiseLevel);
  cfg.period_level = 0.0;
  cfg.se_probability = -0.1;
  CHECK_THROWS_AS(sample_realization(cfg, 5, 1), InvalidNoiseLevel);
}

TEST_CASE("realizations are reproducible and independent") {
  NoiseConfig cfg;
  cfg.amplitude_level = 1.0;
  cfg.period_level = 0.5;
  cfg.se_probability = 0.3;
  cfg.master_seed = 99;
  const auto a = sample_realization(cfg, 10000, 4);
  const auto b = sample_realization(cfg, 10000, 4);
  for (std::size_t i = 0; i < a.kicks(); ++i) {
    REQUIRE(a.amplitude_factors()[i] == b.amplitude_factors()[i]);
    REQUIRE(a.period_offsets()[i] == b.period_offsets()[i]);
  }
  for (std::size_t atom = 0; atom < 4; ++atom)
    for (std::size_t k = 0; k < 100; ++k) {
      REQUIRE(a.spontaneous_emission(atom, k) == b.spontaneous_emission(atom, k));
      REQUIRE(a.reshuffled_beta(atom, k) == b.reshuffled_beta(atom, k));
    }

  cfg.realization_index = 1;
  const auto c = sample_realization(cfg, 10000, 4);
  double sa = 0, sc = 0, saa = 0, scc = 0, sac = 0;
  const double n = 10000.0;
  for (std::size_t i = 0; i < a.kicks(); ++i) {
    const double x = a.amplitude_factors()[i];
    const double y = c.amplitude_factors()[i];
    sa += x;
    sc += y;
    saa += x * x;
    scc += y * y;
    sac += x * y;
  }
  const double r = (sac / n - sa * sc / n / n) / std::sqrt((saa / n - sa * sa / n / n) * (scc / n - sc * sc / n / n));
  CHECK(std::abs(r) < 0.05);
}

TEST_CASE("spontaneous emission frequency") {
  NoiseConfig cfg;
  cfg.se_probability = 0.025;
  const auto r = sample_realization(cfg, 20, 5000);
  int events = 0;
  double beta_sum = 0.0;
  for (std::size_t atom = 0; atom < 5000; ++atom)
    for (std::size_t k = 0; k < 20; ++k)
      if (r.spontaneous_emission(atom, k)) {
        ++events;
        const double b = r.reshuffled_beta(atom, k);
        CHECK(b >= 0.0);
        CHECK(b < 1.0);
        beta_sum += b;
      }
  CHECK(events / 100000.0 == doctest::Approx(0.025).epsilon(0.06));
  CHECK(beta_sum / events == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("json round trip") {
  NoiseConfig cfg;
  cfg.amplitude_level = 1.5;
  cfg.period_level = 0.2;
  cfg.se_probability = 0.1;
  cfg.master_seed = 5;
  cfg.realization_index = 8;
  const auto a = sample_realization(cfg, 20, 7);
  const auto j = a.to_json();
  CHECK(j.at("master_seed") == 5);
  const auto b = NoiseRealization::from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(b.kicks() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.amplitude_factors()[i] == b.amplitude_factors()[i]);
    CHECK(a.period_offsets()[i] == b.period_offsets()[i]);
    CHECK(a.spontaneous_emission(3, i) == b.spontaneous_emission(3, i));
  }
}
