#pragma once

// CSV and JSON emitters. Every file starts with the tool version and the
// resolved configuration so a result can be traced back to its inputs.
// Numbers use the shortest round-trip representation, which is locale- and
// platform-independent.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aokr/epsmap.hpp"
#include "aokr/qkr.hpp"
#include "aokr/scan.hpp"

namespace aokr::cli {

std::string version();

/// Shortest decimal that parses back to the same double.
std::string format_number(double v);

/// "# key: value" header lines.
void write_header(std::ostream& os, const std::string& kind, const nlohmann::json& config);

/// Columns: [epsilon|period_us,]hbar,level,<E|D>,sem, one row per (level, point).
void write_curve_csv(std::ostream& os, const EnergyCurve& curve);

nlohmann::json curve_to_json(const EnergyCurve& curve);

/// Columns: phi,rho,trajectory.
void write_portrait_csv(std::ostream& os, const std::vector<epsmap::PortraitPoint>& points,
                        const nlohmann::json& config);

/// Columns: p,probability.
void write_distribution_csv(std::ostream& os, const qkr::MomentumDistribution& d, const nlohmann::json& config);

/// Writes `text` to `path`, throwing std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace aokr::cli
