#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cli/state_io.hpp"
#include "modeforge/teleport.hpp"

namespace modeforge::cli {

enum class Format { Json, Csv };

Format parse_format(const std::string& s, const std::string& flag);

/// 12 significant digits, '.' decimal, locale independent.
std::string format_double(double v);

/// Requested worker count (0 = hardware concurrency), capped by MODEFORGE_THREADS.
unsigned resolve_threads(unsigned requested);

/// "N=1..20" -> {1, 20}.
std::pair<int, int> parse_sweep(const std::string& text, const std::string& flag);

struct MetrologyArgs {
  StateSpec state;
  std::string generator = "nlr";
  std::optional<std::pair<int, int>> sweep;
  Format format = Format::Csv;
};
std::string metrology_report(const MetrologyArgs& args, unsigned threads);

struct EntangleArgs {
  StateSpec state;
  std::string bipartition = "LR";
  std::vector<std::string> measures{"entropy", "negativity", "witness"};
};
std::string entangle_report(const EntangleArgs& args);

struct TeleportArgs {
  StateSpec resource;
  std::optional<StateSpec> input;
  int m = 1;
  std::string simulate = "exact";
  std::optional<std::uint64_t> seed;
  std::size_t samples = 100000;
  BellVariant measurement = BellVariant::Complete;
};
std::string teleport_report(const TeleportArgs& args, unsigned threads);

struct ParadoxArgs {
  double zeta = 0.5, xi = 0.5, eta = 0.5;
  double theta = 0.0, phi = 0.0, omega = 0.0;
  int n = 2;
};
std::string paradox_report(const ParadoxArgs& args);

struct ReproduceResult {
  std::string text;
  bool all_pass = true;
  std::size_t rows = 0;
};
ReproduceResult reproduce_all(int nmax, Format format, unsigned threads);

}  // namespace modeforge::cli
