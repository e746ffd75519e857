// aokr: scans, phase portraits and closed-form predictions for the
// atom-optics kicked rotor with pulse-train noise.
//
// Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aokr/config.hpp"
#include "aokr/error.hpp"
#include "aokr/report.hpp"
#include "aokr/scan.hpp"
#include "aokr/theory.hpp"

using nlohmann::json;
namespace cli = aokr::cli;

namespace {

bool quiet = false;

void log(const std::string& msg) {
  if (!quiet) std::cerr << "[aokr] " << msg << '\n';
}

enum class Kind { number, integer, unsigned_integer, text, numbers, pair, nullable_number };

struct Flag {
  const char* name;
  const char* key;
  Kind kind;
  const char* help;
  std::vector<std::string> values;
};

double to_double(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw aokr::ConfigError("--" + flag + ": '" + s + "' is not a number");
}

long long to_integer(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw aokr::ConfigError("--" + flag + ": '" + s + "' is not an integer");
}

json flag_value(const Flag& f) {
  const std::string name = f.name;
  switch (f.kind) {
    case Kind::number:
      return to_double(f.values.front(), name);
    case Kind::nullable_number:
      if (f.values.front() == "inf" || f.values.front() == "none") return nullptr;
      return to_double(f.values.front(), name);
    case Kind::integer:
      return to_integer(f.values.front(), name);
    case Kind::unsigned_integer: {
      const auto& s = f.values.front();
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw aokr::ConfigError("--" + name + ": '" + s + "' is not a non-negative integer");
      return std::stoull(s);
    }
    case Kind::text:
      return f.values.front();
    case Kind::numbers:
    case Kind::pair: {
      json a = json::array();
      for (const auto& v : f.values) a.push_back(to_double(v, name));
      return a;
    }
  }
  return nullptr;
}

std::vector<Flag> scan_flags() {
  return {
      {"engine", "engine", Kind::text, "quantum | eps-classical | theory", {}},
      {"abscissa", "abscissa", Kind::text, "hbar | epsilon | period-us", {}},
      {"range", "range", Kind::pair, "scan bounds LO HI", {}},
      {"step", "step", Kind::number, "scan step", {}},
      {"noise", "noise", Kind::text, "amplitude | period", {}},
      {"levels", "levels", Kind::numbers, "noise levels", {}},
      {"kicks", "kicks", Kind::integer, "kicks per run (default 20)", {}},
      {"k", "k", Kind::number, "kick strength k = kappa/hbar (default 3.77)", {}},
      {"atoms", "atoms", Kind::integer, "atoms per realization (default 1000)", {}},
      {"realizations", "realizations", Kind::integer, "realizations per noisy point (default 12)", {}},
      {"zero-noise-realizations", "zero_noise_realizations", Kind::integer,
       "realizations at zero noise (default 3)", {}},
      {"seed", "seed", Kind::unsigned_integer, "master seed", {}},
      {"sigma-p", "sigma_p", Kind::number, "thermal momentum width in two-photon recoils (default 2.5)", {}},
      {"beta-mode", "beta_mode", Kind::text, "from-momentum | fixed | uniform", {}},
      {"beta", "beta", Kind::number, "quasimomentum for --beta-mode fixed", {}},
      {"se-probability", "se_probability", Kind::number, "spontaneous emission per atom per pulse (default 0.025)",
       {}},
      {"kappa-spread", "kappa_spread", Kind::number, "relative spread of the per-atom kick strength", {}},
      {"detection-window", "detection_window", Kind::nullable_number, "discard |p| above this (inf = off)", {}},
      {"cutoff", "cutoff", Kind::integer, "momentum ladder half-width M (default 512)", {}},
      {"resonance-order", "resonance_order", Kind::integer, "m in hbar = 2 pi m + eps (default 1)", {}},
      {"recoil-frequency", "recoil_frequency", Kind::number, "recoil frequency in rad/s for period-us", {}},
      {"period-quantum", "period_quantum", Kind::number, "timing grid for pulse offsets, units of T (0 = off)", {}},
      {"kick-method", "kick_method", Kind::text, "convolution | spectral", {}},
      {"threads", "threads", Kind::integer, "worker threads (0 = all)", {}},
      {"histogram-bin", "histogram_bin", Kind::number, "momentum bin for --distributions (default 0.29)", {}},
  };
}

std::string sidecar_path(const std::string& output) { return output + ".json"; }

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    cli::write_file(output, text);
    log("wrote " + output);
  }
}

int run_scan_command(const std::string& config_path, std::vector<Flag>& flags, const std::string& output,
                     const std::string& distributions_dir) {
  json j = config_path.empty() ? json::object() : cli::read_config_json(config_path);
  for (const auto& f : flags)
    if (!f.values.empty()) j[f.key] = flag_value(f);
  cli::ScanSpec spec;
  try {
    spec = cli::spec_from_json(j);
  } catch (const aokr::ConfigError& e) {
    throw aokr::ConfigError(config_path.empty() ? std::string(e.what()) : config_path + ": " + e.what());
  }
  if (!distributions_dir.empty() && spec.engine != cli::Engine::quantum)
    throw aokr::ConfigError("--distributions: only the quantum engine produces momentum distributions");

  log("scan: engine " + cli::to_string(spec.engine) + ", " + std::to_string(spec.points().size()) + " points x " +
      std::to_string(spec.levels.size()) + " levels");
  const auto curve = cli::run_scan(spec, !distributions_dir.empty(), log);

  std::ostringstream csv;
  cli::write_curve_csv(csv, curve);
  emit(output, csv.str());
  if (!output.empty() && output != "-") emit(sidecar_path(output), cli::curve_to_json(curve).dump(2) + "\n");

  if (!distributions_dir.empty()) {
    std::filesystem::create_directories(distributions_dir);
    for (const auto& d : curve.distributions) {
      json cfg = cli::to_json(spec);
      cfg["level"] = curve.levels[d.level_index];
      cfg["hbar"] = curve.hbar[d.point_index];
      std::ostringstream os;
      cli::write_distribution_csv(os, d.distribution, cfg);
      const auto path = (std::filesystem::path(distributions_dir) /
                         ("distribution_L" + std::to_string(d.level_index) + "_P" + std::to_string(d.point_index) + ".csv"))
                            .string();
      emit(path, os.str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atom-optics kicked rotor with pulse-train noise"};
  app.set_version_flag("--version", cli::version());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-q,--quiet", quiet, "suppress progress messages on stderr");

  // scan
  auto* scan = app.add_subcommand("scan", "energy versus hbar, epsilon or pulse period for a list of noise levels");
  std::string config_path;
  std::string scan_output;
  std::string distributions_dir;
  auto flags = scan_flags();
  scan->add_option("-c,--config", config_path, "JSON config file (flags override it)");
  scan->add_option("-o,--output", scan_output, "CSV output path (default stdout); a .json sidecar is written next to it");
  scan->add_option("--distributions", distributions_dir, "directory for final momentum distributions (quantum engine)");
  for (auto& f : flags) {
    auto* opt = scan->add_option("--" + std::string(f.name), f.values, f.help);
    if (f.kind == Kind::pair)
      opt->expected(2);
    else if (f.kind == Kind::numbers)
      opt->expected(1, -1);
    else
      opt->expected(1);
  }

  // portrait
  auto* portrait = app.add_subcommand("portrait", "phase-space points of the epsilon-classical map");
  cli::PortraitSpec ps;
  ps.params.k = 3.7;
  ps.params.epsilon = 0.02;
  std::string portrait_output;
  portrait->add_option("--epsilon", ps.params.epsilon, "hbar - 2 pi m")->capture_default_str();
  portrait->add_option("--k", ps.params.k, "kick strength kappa/hbar")->capture_default_str();
  portrait->add_option("--level", ps.amplitude_level, "amplitude noise level in [0,2]")->capture_default_str();
  portrait->add_option("--beta", ps.params.beta, "quasimomentum")->capture_default_str();
  portrait->add_option("--l", ps.params.l, "integer l")->capture_default_str();
  portrait->add_option("--m", ps.params.m, "resonance order")->capture_default_str();
  portrait->add_option("--n-phi", ps.grid.n_phi, "initial angles")->capture_default_str();
  portrait->add_option("--n-rho", ps.grid.n_rho, "initial momenta")->capture_default_str();
  portrait->add_option("--rho-min", ps.grid.rho_min, "lowest initial rho")->capture_default_str();
  portrait->add_option("--rho-max", ps.grid.rho_max, "highest initial rho")->capture_default_str();
  portrait->add_option("--iters", ps.iters, "iterations per trajectory")->capture_default_str();
  portrait->add_option("--seed", ps.seed, "noise seed")->capture_default_str();
  portrait->add_option("-o,--output", portrait_output, "CSV output path (default stdout)");

  // predict
  auto* predict = app.add_subcommand("predict", "closed-form diffusion rates and resonance heights");
  double p_kappa = NAN;
  double p_k = NAN;
  double p_hbar = aokr::kTwoPi;
  double p_level = 0.0;
  int p_kicks = 20;
  std::string p_regime = "quantum";
  auto* kappa_opt = predict->add_option("--kappa", p_kappa, "stochasticity parameter kappa");
  predict->add_option("--k", p_k, "kick strength k = kappa/hbar")->excludes(kappa_opt);
  predict->add_option("--hbar", p_hbar, "scaled Planck constant")->capture_default_str();
  predict->add_option("--level", p_level, "amplitude noise level in [0,2]")->capture_default_str();
  predict->add_option("--kicks", p_kicks, "kick count for resonance heights")->capture_default_str();
  predict->add_option("--regime", p_regime, "quantum | classical Bessel argument")
      ->check(CLI::IsMember({"quantum", "classical"}))
      ->capture_default_str();

  // extract-k
  auto* extract = app.add_subcommand("extract-k", "kick strength from a measured resonance energy");
  double x_energy = NAN;
  int x_kicks = 20;
  std::string x_mode = "no-noise";
  extract->add_option("--energy", x_energy, "resonance energy gain")->required();
  extract->add_option("--kicks", x_kicks, "kick count")->capture_default_str();
  extract->add_option("--mode", x_mode, "no-noise | max-amplitude-noise | quasilinear")
      ->check(CLI::IsMember({"no-noise", "max-amplitude-noise", "quasilinear"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*scan) return run_scan_command(config_path, flags, scan_output, distributions_dir);

    if (*portrait) {
      if (ps.params.beyond_validity())
        log("warning: |eps| > 0.5, the epsilon-classical map is outside its range of validity");
      const auto points = cli::run_portrait(ps);
      std::ostringstream os;
      cli::write_portrait_csv(os, points, ps.to_json());
      emit(portrait_output, os.str());
      if (!portrait_output.empty() && portrait_output != "-") {
        json meta = {{"tool", "aokr"}, {"version", cli::version()}, {"config", ps.to_json()},
                     {"points", points.size()}};
        emit(sidecar_path(portrait_output), meta.dump(2) + "\n");
      }
      return 0;
    }

    if (*predict) {
      if (std::isnan(p_kappa) && std::isnan(p_k)) throw aokr::ConfigError("predict: give --kappa or --k");
      if (!(p_hbar > 0.0)) throw aokr::ConfigError("--hbar: must be > 0");
      aokr::theory::DiffusionInputs in;
      in.hbar = p_hbar;
      in.kappa = std::isnan(p_kappa) ? p_k * p_hbar : p_kappa;
      in.regime = p_regime == "classical" ? aokr::theory::Regime::classical : aokr::theory::Regime::quantum;
      in.amplitude_level = p_level;
      const double k = in.kappa / in.hbar;
      json out = {
          {"kappa", in.kappa},
          {"hbar", in.hbar},
          {"k", k},
          {"regime", p_regime},
          {"amplitude_level", p_level},
          {"bessel_argument", aokr::theory::bessel_argument(in)},
          {"diffusion_rate", aokr::theory::diffusion_rate(in)},
          {"diffusion_rate_with_noise", aokr::theory::diffusion_rate_with_noise(in)},
          {"quasilinear_rate", k * k / 4.0},
      };
      if (p_level == 0.0 || p_level == 2.0)
        out["resonance_height"] = aokr::theory::resonance_height(k, p_kicks, p_level);
      else
        out["resonance_height"] = nullptr;
      out["kicks"] = p_kicks;
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*extract) {
      using aokr::theory::ResonanceMode;
      const ResonanceMode mode = x_mode == "max-amplitude-noise" ? ResonanceMode::max_amplitude_noise
                                 : x_mode == "quasilinear"      ? ResonanceMode::quasilinear
                                                                 : ResonanceMode::no_noise;
      const double k = aokr::theory::extract_k_from_energy(x_energy, x_kicks, mode);
      std::cout << json{{"energy", x_energy}, {"kicks", x_kicks}, {"mode", x_mode}, {"k", k}}.dump(2) << '\n';
      return 0;
    }
  } catch (const aokr::ConfigError& e) {
    std::cerr << "aokr: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const aokr::InvalidNoiseLevel& e) {
    std::cerr << "aokr: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const aokr::UnsupportedNoiseLevel& e) {
    std::cerr << "aokr: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const aokr::EpsilonZero& e) {
    std::cerr << "aokr: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "aokr: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "aokr: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
