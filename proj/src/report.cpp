#include "aokr/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace aokr::cli {

using nlohmann::json;

std::string version() { return AOKR_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_header(std::ostream& os, const std::string& kind, const json& config) {
  os << "# aokr " << version() << '\n';
  os << "# output: " << kind << '\n';
  os << "# config: " << config.dump() << '\n';
}

void write_curve_csv(std::ostream& os, const EnergyCurve& c) {
  write_header(os, "energy-curve", to_json(c.spec));
  const bool extra = c.spec.abscissa != Abscissa::hbar;
  if (extra) os << (c.spec.abscissa == Abscissa::epsilon ? "epsilon" : "period_us") << ',';
  os << "hbar,level," << c.quantity() << ",sem\n";
  for (std::size_t l = 0; l < c.levels.size(); ++l) {
    for (std::size_t i = 0; i < c.abscissa.size(); ++i) {
      if (extra) os << format_number(c.abscissa[i]) << ',';
      os << format_number(c.hbar[i]) << ',' << format_number(c.levels[l]) << ',' << format_number(c.energy[l][i])
         << ',' << format_number(c.sem[l][i]) << '\n';
    }
  }
}

json curve_to_json(const EnergyCurve& c) {
  json j;
  j["tool"] = "aokr";
  j["version"] = version();
  j["config"] = to_json(c.spec);
  j["quantity"] = c.quantity();
  j["abscissa"] = c.abscissa;
  j["hbar"] = c.hbar;
  j["levels"] = c.levels;
  j["values"] = c.energy;
  j["sem"] = c.sem;
  j["seeds"] = c.seeds;
  j["realizations"] = json::array();
  for (double level : c.levels) j["realizations"].push_back(c.spec.realizations_for(level));
  return j;
}

void write_portrait_csv(std::ostream& os, const std::vector<epsmap::PortraitPoint>& points, const json& config) {
  write_header(os, "phase-portrait", config);
  os << "phi,rho,trajectory\n";
  for (const auto& p : points) os << format_number(p.phi) << ',' << format_number(p.rho) << ',' << p.trajectory << '\n';
}

void write_distribution_csv(std::ostream& os, const qkr::MomentumDistribution& d, const json& config) {
  write_header(os, "momentum-distribution", config);
  os << "# bin_width: " << format_number(d.bin_width) << '\n';
  os << "# mean_energy: " << format_number(d.mean_energy) << '\n';
  os << "# sem: " << format_number(d.sem) << '\n';
  os << "p,probability\n";
  for (std::size_t i = 0; i < d.momentum.size(); ++i)
    os << format_number(d.momentum[i]) << ',' << format_number(d.probability[i]) << '\n';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace aokr::cli
