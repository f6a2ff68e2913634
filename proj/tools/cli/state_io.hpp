#pragma once

// State specs on the command line ("coh:N=4,xi=0.5,phi=0") and the JSON
// state file format used by "custom:@file.json".

#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "modeforge/states.hpp"

namespace modeforge::cli {

/// Bad command-line input. `flag` names the offending option.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string flag, const std::string& what)
      : std::runtime_error(flag + ": " + what), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

struct StateSpec {
  std::string family;  ///< fock | noon | unif | coh | twofock | custom
  std::map<std::string, std::string> params;
  std::string path;  ///< custom only

  int n() const;
  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  /// Canonical text form, keys sorted.
  std::string str() const;
};

/// Parses `text`; errors are reported against `flag`.
StateSpec parse_state_spec(const std::string& text, const std::string& flag);

/// Builds the state over `pair` (its total_n is replaced by the parsed N).
/// Custom states are embedded into pair.registry().
StateVector build_state(const StateSpec& spec, TwoModeSpec pair, const std::string& flag);

/// {"modes": [["L","up"],...], "sector": N|null, "amps": [[[n...], re, im], ...]}
nlohmann::json state_to_json(const StateVector& s);
StateVector state_from_json(const nlohmann::json& j);

}  // namespace modeforge::cli
