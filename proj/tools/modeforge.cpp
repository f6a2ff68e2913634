#include <fstream>
#include <iostream>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/reports.hpp"
#include "json.hpp"

using namespace modeforge;
using namespace modeforge::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;

// Expands "--config file.json" (a flat JSON object keyed by flag name) into
// "--key=value" arguments placed right after the subcommand. Keys whose flag
// is also given on the command line are dropped.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ParseError("--config", "missing file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty()) return out;

  std::ifstream in(path);
  if (!in) throw ParseError("--config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("--config", "expected a flat JSON object");

  std::set<std::string> given;
  for (const auto& a : out)
    if (a.rfind("-", 0) == 0) given.insert(a.substr(0, a.find('=')));

  std::vector<std::string> extra;
  std::string command;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string()) throw ParseError("--config", "'command' must be a string");
      command = value.get<std::string>();
      continue;
    }
    const std::string flag = (key.size() == 1 ? "-" : "--") + key;
    if (given.count(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_string()) {
      extra.push_back(flag + "=" + value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      extra.push_back(flag + "=" + value.dump());
    } else if (value.is_number_float()) {
      extra.push_back(flag + "=" + format_double(value.get<double>()));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      extra.push_back(flag + "=" + joined);
    } else {
      throw ParseError("--config", "unsupported value for '" + key + "'");
    }
  }

  // out[0] is the program name; the subcommand, if present, follows.
  std::size_t at = 1;
  if (out.size() > 1 && out[1].rfind("-", 0) != 0) {
    at = 2;
  } else {
    if (command.empty()) throw ParseError("--config", "no subcommand given");
    out.insert(out.begin() + 1, command);
    at = 2;
  }
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("--output", "cannot write '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modeforge: bosonic mode entanglement, metrology and teleportation"};
  app.require_subcommand(1);
  app.set_config();  // disable CLI11's own config handling; see expand_config

  std::string output;
  unsigned threads = 0;
  std::string format = "json";

  auto common = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--output,-o", output, "Report file (default stdout)");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores, capped by MODEFORGE_THREADS)");
    sub->add_option("--out", format, "Output format: json or csv")->default_str(default_format);
  };

  // metrology
  std::string m_state, m_generator = "nlr", m_sweep;
  auto* metro = app.add_subcommand("metrology", "Quantum Fisher information of a state family");
  metro->add_option("--state", m_state, "State spec, e.g. noon:N=4")->required();
  metro->add_option("--generator", m_generator, "nlr or tlr");
  metro->add_option("--sweep", m_sweep, "Particle-number sweep, e.g. N=1..20");
  common(metro, "csv");

  // entangle
  std::string e_state, e_bipartition = "LR", e_measures = "entropy,negativity,witness";
  auto* ent = app.add_subcommand("entangle", "Mode-entanglement measures across a bipartition");
  ent->add_option("--state", e_state, "State spec")->required();
  ent->add_option("--bipartition", e_bipartition, "LR or updown");
  ent->add_option("--measures", e_measures, "Comma list of entropy, negativity, witness");
  common(ent, "json");

  // teleport
  std::string t_resource, t_input, t_simulate = "exact", t_measurement = "complete";
  int t_m = 1;
  std::uint64_t t_seed = 0;
  std::size_t t_samples = 100000;
  auto* tel = app.add_subcommand("teleport", "Fixed-particle-number teleportation");
  tel->add_option("--resource", t_resource, "Resource state spec on (L,up),(R,down)")->required();
  tel->add_option("--M", t_m, "Input particle number")->required();
  tel->add_option("--input", t_input, "Input state spec on (X,up),(Y,down); default unif:N=M");
  tel->add_option("--simulate", t_simulate, "exact or mc");
  auto* seed_opt = tel->add_option("--seed", t_seed, "Seed for --simulate mc");
  tel->add_option("--samples", t_samples, "Monte-Carlo sample count")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  tel->add_option("--measurement", t_measurement, "complete or restricted");
  common(tel, "json");

  // paradox
  ParadoxArgs p_args;
  auto* par = app.add_subcommand("paradox", "Entanglement swapping with particle-separable ingredients");
  par->add_option("--zeta", p_args.zeta, "Input weight on (X,up)");
  par->add_option("--xi", p_args.xi, "Resource weight on (L,up)");
  par->add_option("--eta", p_args.eta, "E0 target weight on (Y,down)");
  par->add_option("--theta", p_args.theta, "Input phase");
  par->add_option("--phi", p_args.phi, "Resource phase");
  par->add_option("--omega", p_args.omega, "E0 target phase");
  par->add_option("--n", p_args.n, "Particles per coherent state");
  common(par, "json");

  // reproduce-all
  int r_nmax = 8;
  auto* rep = app.add_subcommand("reproduce-all", "Check every closed form against numerics");
  rep->add_option("--Nmax", r_nmax, "Largest particle number");
  common(rep, "csv");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "modeforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "modeforge: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const unsigned workers = resolve_threads(threads);
    CLI::App* sub = app.get_subcommands().front();
    const bool format_given = sub->count("--out") > 0;
    std::string text;
    int code = kExitOk;

    if (sub == metro) {
      MetrologyArgs a;
      a.state = parse_state_spec(m_state, "--state");
      a.generator = m_generator;
      if (!m_sweep.empty()) a.sweep = parse_sweep(m_sweep, "--sweep");
      a.format = parse_format(format_given ? format : "csv", "--out");
      text = metrology_report(a, workers);
    } else if (sub == ent) {
      EntangleArgs a;
      a.state = parse_state_spec(e_state, "--state");
      a.bipartition = e_bipartition;
      a.measures.clear();
      std::stringstream ss(e_measures);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) a.measures.push_back(item);
      if (format_given && parse_format(format, "--out") != Format::Json) throw ParseError("--out", "entangle emits json only");
      text = entangle_report(a);
    } else if (sub == tel) {
      TeleportArgs a;
      a.resource = parse_state_spec(t_resource, "--resource");
      if (!t_input.empty()) a.input = parse_state_spec(t_input, "--input");
      a.m = t_m;
      a.simulate = t_simulate;
      if (seed_opt->count() > 0) a.seed = t_seed;
      a.samples = t_samples;
      if (t_measurement == "complete")
        a.measurement = BellVariant::Complete;
      else if (t_measurement == "restricted")
        a.measurement = BellVariant::Restricted;
      else
        throw ParseError("--measurement", "must be complete or restricted");
      if (format_given && parse_format(format, "--out") != Format::Json) throw ParseError("--out", "teleport emits json only");
      text = teleport_report(a, workers);
    } else if (sub == par) {
      if (format_given && parse_format(format, "--out") != Format::Json) throw ParseError("--out", "paradox emits json only");
      text = paradox_report(p_args);
    } else if (sub == rep) {
      const ReproduceResult r = reproduce_all(r_nmax, parse_format(format_given ? format : "csv", "--out"), workers);
      text = r.text;
      if (!r.all_pass) code = kExitTolerance;
    }
    emit(text, output);
    return code;
  } catch (const ParseError& e) {
    std::cerr << "modeforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "modeforge: error: " << e.what() << "\n";
    return kExitUsage;
  }
}
