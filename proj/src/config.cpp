#include "aokr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "aokr/error.hpp"

namespace aokr::cli {

using nlohmann::json;

namespace {

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<Engine> kEngines[] = {
    {Engine::quantum, "quantum"}, {Engine::eps_classical, "eps-classical"}, {Engine::theory, "theory"}};
constexpr Names<Abscissa> kAbscissae[] = {
    {Abscissa::hbar, "hbar"}, {Abscissa::epsilon, "epsilon"}, {Abscissa::period_us, "period-us"}};
constexpr Names<NoiseKind> kNoiseKinds[] = {{NoiseKind::amplitude, "amplitude"}, {NoiseKind::period, "period"}};
constexpr Names<qkr::BetaMode> kBetaModes[] = {{qkr::BetaMode::from_momentum, "from-momentum"},
                                               {qkr::BetaMode::fixed, "fixed"},
                                               {qkr::BetaMode::uniform, "uniform"}};
constexpr Names<qkr::KickMethod> kKickMethods[] = {{qkr::KickMethod::convolution, "convolution"},
                                                   {qkr::KickMethod::spectral, "spectral"}};

template <class E, std::size_t N>
std::string name_of(const Names<E> (&table)[N], E v) {
  for (const auto& t : table)
    if (t.value == v) return t.name;
  return "?";
}

template <class E, std::size_t N>
E parse_name(const Names<E> (&table)[N], const json& j, const char* field) {
  if (!j.is_string()) throw ConfigError(std::string(field) + ": expected a string");
  const auto s = j.get<std::string>();
  std::string allowed;
  for (const auto& t : table) {
    if (s == t.name) return t.value;
    allowed += allowed.empty() ? t.name : std::string(", ") + t.name;
  }
  throw ConfigError(std::string(field) + ": unknown value '" + s + "' (allowed: " + allowed + ")");
}

double number(const json& j, const char* field) {
  if (!j.is_number()) throw ConfigError(std::string(field) + ": expected a number");
  return j.get<double>();
}

long long integer(const json& j, const char* field) {
  if (!j.is_number_integer()) throw ConfigError(std::string(field) + ": expected an integer");
  return j.get<long long>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

int line_of(std::string_view text, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

std::string to_string(Engine e) { return name_of(kEngines, e); }
std::string to_string(Abscissa a) { return name_of(kAbscissae, a); }
std::string to_string(NoiseKind n) { return name_of(kNoiseKinds, n); }
std::string to_string(qkr::BetaMode b) { return name_of(kBetaModes, b); }
std::string to_string(qkr::KickMethod m) { return name_of(kKickMethods, m); }

void ScanSpec::validate() const {
  require(std::isfinite(lo) && std::isfinite(hi), "range: bounds must be finite");
  require(lo < hi, "range: lo (" + fmt(lo) + ") must be < hi (" + fmt(hi) + ")");
  require(step > 0.0, "step: must be > 0, got " + fmt(step));
  require((hi - lo) / step < 1e6, "step: more than 10^6 scan points");
  require(!levels.empty(), "levels: at least one noise level is required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string field = "levels[" + std::to_string(i) + "]";
    if (noise == NoiseKind::amplitude)
      require(levels[i] >= 0.0 && levels[i] <= 2.0,
              field + ": amplitude noise level " + fmt(levels[i]) + " outside [0,2]");
    else
      require(levels[i] >= 0.0 && levels[i] < 1.0, field + ": period noise level " + fmt(levels[i]) + " outside [0,1)");
  }
  require(kicks >= 1, "kicks: must be >= 1");
  require(k >= 0.0, "k: must be >= 0");
  require(atoms >= 1, "atoms: must be >= 1");
  require(realizations >= 1, "realizations: must be >= 1");
  require(zero_noise_realizations >= 1, "zero_noise_realizations: must be >= 1");
  require(sigma_p >= 0.0, "sigma_p: must be >= 0");
  require(beta >= 0.0 && beta < 1.0, "beta: must lie in [0,1)");
  require(se_probability >= 0.0 && se_probability <= 1.0, "se_probability: must lie in [0,1]");
  require(kappa_spread >= 0.0, "kappa_spread: must be >= 0");
  require(detection_window > 0.0, "detection_window: must be > 0");
  require(cutoff >= 8, "cutoff: must be >= 8");
  require(resonance_order >= 1, "resonance_order: must be a positive integer");
  require(recoil_frequency > 0.0, "recoil_frequency: must be > 0");
  require(period_quantum >= 0.0, "period_quantum: must be >= 0");
  require(histogram_bin > 0.0, "histogram_bin: must be > 0");
  if (engine != Engine::quantum)
    require(noise == NoiseKind::amplitude, "noise: the " + to_string(engine) + " engine supports amplitude noise only");
  for (double x : points()) {
    const double h = hbar_at(x);
    require(h > 0.0, "range: abscissa value " + fmt(x) + " gives hbar = " + fmt(h) + " <= 0");
  }
}

std::vector<double> ScanSpec::points() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(hi >= lo)) return out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

double ScanSpec::hbar_at(double x) const {
  switch (abscissa) {
    case Abscissa::hbar:
      return x;
    case Abscissa::epsilon:
      return kTwoPi * resonance_order + x;
    case Abscissa::period_us:
      return hbar_from_period(x * 1e-6, recoil_frequency);
  }
  return x;
}

int ScanSpec::realizations_for(double level) const { return level == 0.0 ? zero_noise_realizations : realizations; }

json to_json(const ScanSpec& s) {
  json j;
  j["engine"] = to_string(s.engine);
  j["abscissa"] = to_string(s.abscissa);
  j["range"] = {s.lo, s.hi};
  j["step"] = s.step;
  j["noise"] = to_string(s.noise);
  j["levels"] = s.levels;
  j["kicks"] = s.kicks;
  j["k"] = s.k;
  j["atoms"] = s.atoms;
  j["realizations"] = s.realizations;
  j["zero_noise_realizations"] = s.zero_noise_realizations;
  j["seed"] = s.seed;
  j["sigma_p"] = s.sigma_p;
  j["beta_mode"] = to_string(s.beta_mode);
  j["beta"] = s.beta;
  j["se_probability"] = s.se_probability;
  j["kappa_spread"] = s.kappa_spread;
  j["detection_window"] = std::isfinite(s.detection_window) ? json(s.detection_window) : json(nullptr);
  j["cutoff"] = s.cutoff;
  j["resonance_order"] = s.resonance_order;
  j["recoil_frequency"] = s.recoil_frequency;
  j["period_quantum"] = s.period_quantum;
  j["kick_method"] = to_string(s.kick_method);
  j["histogram_bin"] = s.histogram_bin;
  return j;
}

ScanSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  ScanSpec s;
  for (const auto& [key, v] : j.items()) {
    const char* f = key.c_str();
    if (key == "engine") {
      s.engine = parse_name(kEngines, v, f);
    } else if (key == "abscissa") {
      s.abscissa = parse_name(kAbscissae, v, f);
    } else if (key == "range") {
      require(v.is_array() && v.size() == 2, "range: expected [lo, hi]");
      s.lo = number(v[0], "range[0]");
      s.hi = number(v[1], "range[1]");
    } else if (key == "step") {
      s.step = number(v, f);
    } else if (key == "noise") {
      s.noise = parse_name(kNoiseKinds, v, f);
    } else if (key == "levels") {
      require(v.is_array(), "levels: expected an array of numbers");
      s.levels.clear();
      for (std::size_t i = 0; i < v.size(); ++i)
        s.levels.push_back(number(v[i], ("levels[" + std::to_string(i) + "]").c_str()));
    } else if (key == "kicks") {
      s.kicks = static_cast<int>(integer(v, f));
    } else if (key == "k") {
      s.k = number(v, f);
    } else if (key == "atoms") {
      s.atoms = static_cast<int>(integer(v, f));
    } else if (key == "realizations") {
      s.realizations = static_cast<int>(integer(v, f));
    } else if (key == "zero_noise_realizations") {
      s.zero_noise_realizations = static_cast<int>(integer(v, f));
    } else if (key == "seed") {
      require(v.is_number_unsigned(), "seed: expected a non-negative integer");
      s.seed = v.get<std::uint64_t>();
    } else if (key == "sigma_p") {
      s.sigma_p = number(v, f);
    } else if (key == "beta_mode") {
      s.beta_mode = parse_name(kBetaModes, v, f);
    } else if (key == "beta") {
      s.beta = number(v, f);
    } else if (key == "se_probability") {
      s.se_probability = number(v, f);
    } else if (key == "kappa_spread") {
      s.kappa_spread = number(v, f);
    } else if (key == "detection_window") {
      s.detection_window = v.is_null() ? std::numeric_limits<double>::infinity() : number(v, f);
    } else if (key == "cutoff") {
      s.cutoff = static_cast<int>(integer(v, f));
    } else if (key == "resonance_order") {
      s.resonance_order = static_cast<int>(integer(v, f));
    } else if (key == "recoil_frequency") {
      s.recoil_frequency = number(v, f);
    } else if (key == "period_quantum") {
      s.period_quantum = number(v, f);
    } else if (key == "kick_method") {
      s.kick_method = parse_name(kKickMethods, v, f);
    } else if (key == "threads") {
      const auto t = integer(v, f);
      require(t >= 0, "threads: must be >= 0");
      s.threads = static_cast<unsigned>(t);
    } else if (key == "histogram_bin") {
      s.histogram_bin = number(v, f);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  for (const char* needed : {"range", "step", "levels"})
    if (!j.contains(needed)) throw ConfigError(std::string(needed) + ": required field missing");
  s.validate();
  return s;
}

json parse_strict(const std::string& text, const std::string& origin) {
  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  auto callback = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!seen.back().insert(key).second && duplicate.empty()) duplicate = key;
        break;
      }
      default:
        break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, callback);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    if (const auto p = what.find("] "); p != std::string::npos) what = what.substr(p + 2);
    throw ConfigError(origin + ": " + what);
  }
  if (!duplicate.empty()) {
    // Report the line of the second occurrence.
    const std::string quoted = "\"" + duplicate + "\"";
    const auto first = text.find(quoted);
    const auto second = first == std::string::npos ? first : text.find(quoted, first + 1);
    const std::string where =
        second == std::string::npos ? "" : " at line " + std::to_string(line_of(text, second));
    throw ConfigError(origin + ": duplicate key '" + duplicate + "'" + where);
  }
  return j;
}

json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_strict(buf.str(), path);
}

ScanSpec load_config(const std::string& path) {
  const json j = read_config_json(path);
  try {
    return spec_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace aokr::cli
