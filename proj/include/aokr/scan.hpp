#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aokr/config.hpp"
#include "aokr/epsmap.hpp"
#include "aokr/qkr.hpp"

namespace aokr::cli {

struct PointDistribution {
  std::size_t level_index;
  std::size_t point_index;
  qkr::MomentumDistribution distribution;
};

struct EnergyCurve {
  ScanSpec spec;
  std::vector<double> abscissa;
  std::vector<double> hbar;
  std::vector<double> levels;
  /// Indexed [level][point]. The theory engine reports the diffusion rate D.
  std::vector<std::vector<double>> energy;
  std::vector<std::vector<double>> sem;
  /// Master seed of each (level, point); realization r of that point uses index r.
  std::vector<std::vector<std::uint64_t>> seeds;
  std::vector<PointDistribution> distributions;

  /// "E" for simulations, "D" for the theory engine.
  std::string quantity() const;
};

/// Per-point master seed derived from (seed, point, level). Realization r
/// then uses realization_index r, so every per-point result is independent
/// of scan order.
std::uint64_t point_seed(std::uint64_t seed, std::size_t point, std::size_t level);

using ProgressFn = std::function<void(const std::string&)>;

/// Runs every (level, point) of the scan. With `distributions` the quantum
/// engine also records final momentum histograms.
EnergyCurve run_scan(const ScanSpec& spec, bool distributions = false, const ProgressFn& progress = {});

struct PortraitSpec {
  epsmap::EpsParams params;
  double amplitude_level = 0.0;
  epsmap::PortraitGrid grid;
  int iters = 200;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

std::vector<epsmap::PortraitPoint> run_portrait(const PortraitSpec& spec);

}  // namespace aokr::cli
