#include "cli/state_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace modeforge::cli {

namespace {

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"fock", {"N", "l"}},
      {"noon", {"N"}},
      {"unif", {"N", "slope"}},
      {"coh", {"N", "xi", "phi"}},
      {"twofock", {"N", "l1", "l2", "xi", "phi"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

StateSpec parse_state_spec(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError(flag, "state spec '" + text + "' lacks 'family:'");
  StateSpec spec;
  spec.family = trim(text.substr(0, colon));
  const std::string rest = text.substr(colon + 1);
  if (spec.family == "custom") {
    if (rest.size() < 2 || rest[0] != '@') throw ParseError(flag, "custom state needs '@file.json'");
    spec.path = rest.substr(1);
    return spec;
  }
  const auto it = allowed_keys().find(spec.family);
  if (it == allowed_keys().end()) throw ParseError(flag, "unknown state family '" + spec.family + "'");

  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError(flag, "expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (value.empty()) throw ParseError(flag, "empty value for '" + key + "'");
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw ParseError(flag, "key '" + key + "' not valid for family '" + spec.family + "'");
    if (!spec.params.emplace(key, value).second) throw ParseError(flag, "key '" + key + "' given twice");
  }
  if (!spec.params.contains("N")) throw ParseError(flag, "state spec needs N=<int>");
  // Validate numeric syntax now so errors point at the flag.
  for (const auto& [k, v] : spec.params) {
    double d = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc() || p != v.data() + v.size()) throw ParseError(flag, "'" + k + "=" + v + "' is not a number");
  }
  spec.integer("N", 0);
  return spec;
}

double StateSpec::real(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  double d = 0.0;
  std::from_chars(it->second.data(), it->second.data() + it->second.size(), d);
  return d;
}

int StateSpec::integer(const std::string& key, int fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  int v = 0;
  const auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || p != it->second.data() + it->second.size())
    throw ParseError("--state", "'" + key + "' must be an integer");
  return v;
}

int StateSpec::n() const { return integer("N", 0); }

std::string StateSpec::str() const {
  if (family == "custom") return "custom:@" + path;
  std::string out = family + ":";
  bool first = true;
  for (const auto& [k, v] : params) {
    out += (first ? "" : ",") + k + "=" + v;
    first = false;
  }
  return out;
}

StateVector build_state(const StateSpec& spec, TwoModeSpec pair, const std::string& flag) {
  try {
    if (spec.family == "custom") {
      std::ifstream in(spec.path);
      if (!in) throw ParseError(flag, "cannot open '" + spec.path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(flag, std::string("invalid JSON in '") + spec.path + "': " + e.what());
      }
      return embed(state_from_json(j), pair.registry);
    }
    const int n = spec.n();
    if (n < 0 || n > 50) throw ParseError(flag, "N must lie in [0, 50]");
    pair.total_n = n;
    if (spec.family == "fock") return fock_state(pair, spec.integer("l", 0));
    if (spec.family == "noon") return two_fock_superposition(pair, n, 0, 0.5, 0.0);
    if (spec.family == "unif") return uniform_state_linear(pair, spec.real("slope", 0.0));
    if (spec.family == "coh") return su2_coherent(pair, spec.real("xi", 0.5), spec.real("phi", 0.0));
    if (spec.family == "twofock")
      return two_fock_superposition(pair, spec.integer("l1", n), spec.integer("l2", 0), spec.real("xi", 0.5),
                                    spec.real("phi", 0.0));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(flag, e.what());
  }
  throw ParseError(flag, "unknown state family '" + spec.family + "'");
}

nlohmann::json state_to_json(const StateVector& s) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : s.registry().modes()) modes.push_back(nlohmann::json::array({m.spatial, to_string(m.internal)}));
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& [occ, a] : s.amplitudes()) amps.push_back({occ.counts, a.real(), a.imag()});
  return {{"modes", modes},
          {"sector", s.sector() ? nlohmann::json(*s.sector()) : nlohmann::json(nullptr)},
          {"amps", amps}};
}

StateVector state_from_json(const nlohmann::json& j) {
  try {
    std::vector<ModeId> modes;
    for (const auto& m : j.at("modes"))
      modes.push_back({m.at(0).get<std::string>(), parse_internal(m.at(1).get<std::string>())});
    ModeRegistry reg(std::move(modes));
    StateVector::AmplitudeMap amps;
    for (const auto& e : j.at("amps")) {
      FockOccupation occ(e.at(0).get<std::vector<int>>());
      const Complex a(e.at(1).get<double>(), e.at(2).get<double>());
      if (!amps.emplace(std::move(occ), a).second) throw ConfigurationError("duplicate occupation in amps");
    }
    std::optional<int> sector;
    if (j.contains("sector") && !j.at("sector").is_null()) sector = j.at("sector").get<int>();
    return StateVector(std::move(reg), std::move(amps), sector);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed state JSON: ") + e.what());
  }
}

}  // namespace modeforge::cli
