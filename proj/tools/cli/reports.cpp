#include "cli/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "cli/pool.hpp"
#include "modeforge/alt_approaches.hpp"
#include "modeforge/entanglement.hpp"
#include "modeforge/metrology.hpp"

namespace modeforge::cli {

using nlohmann::json;

Format parse_format(const std::string& s, const std::string& flag) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ParseError(flag, "format must be json or csv, got '" + s + "'");
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

double round12(double v) {
  const std::string s = format_double(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

json num(double v) { return std::isfinite(v) ? json(round12(v)) : json(nullptr); }

}  // namespace

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MODEFORGE_THREADS"); env && *env) {
    unsigned cap = 0;
    const std::string s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || p != s.data() + s.size() || cap == 0)
      throw ParseError("MODEFORGE_THREADS", "must be a positive integer, got '" + s + "'");
    n = std::min(n, cap);
  }
  return n;
}

std::pair<int, int> parse_sweep(const std::string& text, const std::string& flag) {
  const auto eq = text.find('=');
  const auto dots = text.find("..");
  if (eq == std::string::npos || dots == std::string::npos || text.substr(0, eq) != "N")
    throw ParseError(flag, "sweep must look like N=<lo>..<hi>, got '" + text + "'");
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw ParseError(flag, "'" + s + "' is not an integer");
    return v;
  };
  const int lo = to_int(text.substr(eq + 1, dots - eq - 1));
  const int hi = to_int(text.substr(dots + 2));
  if (lo < 1 || hi < lo || hi > 50) throw ParseError(flag, "sweep bounds must satisfy 1 <= lo <= hi <= 50");
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// metrology

namespace {

struct MetrologyRow {
  int n = 0;
  std::string family;
  std::string params;
  double numeric = 0.0;
  std::optional<double> closed;
  std::string verdict;
};

std::optional<double> metrology_closed_form(const StateSpec& s, const std::string& gen, int n) {
  if (gen == "nlr") {
    if (s.family == "fock") return 0.0;
    if (s.family == "noon") return closed_form_qfi(TwoFockQfi{n, 0, 0.5});
    if (s.family == "twofock")
      return closed_form_qfi(TwoFockQfi{s.integer("l1", n), s.integer("l2", 0), s.real("xi", 0.5)});
    if (s.family == "unif") return closed_form_qfi(UniformQfi{n});
    if (s.family == "coh") return closed_form_qfi(CoherentQfi{n, s.real("xi", 0.5)});
  } else if (s.family == "fock") {
    return closed_form_qfi(FockTlrQfi{n, s.integer("l", 0)});
  }
  return std::nullopt;
}

std::string params_of(const StateSpec& s) {
  if (s.family == "custom") return s.path;
  std::string out;
  for (const auto& [k, v] : s.params) {
    if (k == "N") continue;
    out += (out.empty() ? "" : ";") + k + "=" + v;
  }
  return out;
}

}  // namespace

std::string metrology_report(const MetrologyArgs& args, unsigned threads) {
  if (args.generator != "nlr" && args.generator != "tlr")
    throw ParseError("--generator", "must be nlr or tlr, got '" + args.generator + "'");
  if (args.sweep && args.state.family == "custom") throw ParseError("--sweep", "custom states cannot be swept");
  std::vector<int> ns;
  if (args.sweep)
    for (int n = args.sweep->first; n <= args.sweep->second; ++n) ns.push_back(n);
  else
    ns.push_back(args.state.family == "custom" ? -1 : args.state.n());

  // Build every state up front so parse errors surface before any work.
  std::vector<StateVector> states;
  for (int n : ns) {
    StateSpec s = args.state;
    if (n >= 0) s.params["N"] = std::to_string(n);
    states.push_back(build_state(s, standard_pair(std::max(n, 0)), "--state"));
  }

  const auto rows = parallel_map<MetrologyRow>(ns.size(), threads, [&](std::size_t i) {
    const StateVector& st = states[i];
    const TwoModeSpec pair = standard_pair(st.sector().value_or(0));
    const Generator g = args.generator == "nlr" ? Generator::nlr(pair) : Generator::tlr(pair);
    MetrologyRow r;
    r.n = st.sector().value_or(0);
    r.family = args.state.family;
    r.params = params_of(args.state);
    r.numeric = qfi(st, g);
    if (args.state.family != "custom") r.closed = metrology_closed_form(args.state, args.generator, r.n);
    r.verdict = to_string(shot_noise_verdict(r.numeric, r.n));
    return r;
  });

  std::ostringstream out;
  if (args.format == Format::Csv) {
    out << "N,family,params,F_numeric,F_closed_form,verdict\n";
    for (const auto& r : rows)
      out << r.n << ',' << r.family << ',' << r.params << ',' << format_double(r.numeric) << ','
          << (r.closed ? format_double(*r.closed) : "") << ',' << r.verdict << '\n';
    return out.str();
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"N", r.n},
                   {"family", r.family},
                   {"params", r.params},
                   {"generator", args.generator},
                   {"F_numeric", num(r.numeric)},
                   {"F_closed_form", r.closed ? num(*r.closed) : json(nullptr)},
                   {"verdict", r.verdict}});
  return json{{"rows", arr}}.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// entangle

std::string entangle_report(const EntangleArgs& args) {
  const int n = args.state.family == "custom" ? 0 : args.state.n();
  const StateVector st = build_state(args.state, standard_pair(n), "--state");
  Bipartition part = [&] {
    try {
      return Bipartition::named(st.registry(), args.bipartition);
    } catch (const std::exception& e) {
      throw ParseError("--bipartition", e.what());
    }
  }();
  json out{{"state", args.state.str()},
           {"bipartition", args.bipartition},
           {"schmidt_rank", schmidt_rank(st, part)},
           {"mode_separable", is_mode_separable(st, part)}};
  if (st.sector()) out["N"] = *st.sector();
  for (const auto& m : args.measures) {
    if (m == "entropy")
      out["entropy"] = num(entropy(reduce(st, part, 1)));
    else if (m == "negativity")
      out["negativity"] = num(negativity(st, part));
    else if (m == "witness")
      out["witness"] = num(number_witness(st, part));
    else
      throw ParseError("--measures", "unknown measure '" + m + "' (entropy, negativity, witness)");
  }
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// teleport

std::string teleport_report(const TeleportArgs& args, unsigned threads) {
  if (args.m < 0 || args.m > 50) throw ParseError("--M", "M must lie in [0, 50]");
  if (args.simulate != "exact" && args.simulate != "mc")
    throw ParseError("--simulate", "must be exact or mc, got '" + args.simulate + "'");
  if (args.simulate == "mc" && !args.seed) throw ParseError("--seed", "Monte-Carlo simulation needs --seed");
  if (args.simulate == "exact" && args.seed) throw ParseError("--seed", "--seed is only valid with --simulate mc");

  const int rn = args.resource.family == "custom" ? 0 : args.resource.n();
  const StateVector resource = build_state(args.resource, TeleportModes::resource_spec(rn), "--resource");
  const int n = resource.sector().value_or(-1);
  if (n < 0) throw ParseError("--resource", "resource must have a fixed particle number");
  if (args.m > n) throw ParseError("--M", "M must not exceed the resource particle number");

  StateSpec in_spec;
  if (args.input) {
    in_spec = *args.input;
  } else {
    in_spec.family = "unif";
    in_spec.params["N"] = std::to_string(args.m);
  }
  if (in_spec.family != "custom" && in_spec.n() != args.m) throw ParseError("--input", "input N must equal --M");
  const StateVector input = build_state(in_spec, TeleportModes::input_spec(args.m), "--input");
  if (input.sector() != args.m) throw ParseError("--input", "input must hold exactly M particles");

  const ProtocolConfig config{args.m, n, resource, args.measurement};
  json outcomes = json::array();
  for (const auto& o : bell_measure(joint_state(input, resource), config))
    outcomes.push_back({{"ell", o.ell},
                        {"lambda", o.lambda},
                        {"p", num(o.probability)},
                        {"overlap", num(outcome_overlap(input, o, config))}});
  const SimulatedFidelity sim = fidelity_simulated(config);
  json out{{"M", args.m},
           {"N", n},
           {"resource", args.resource.str()},
           {"input", in_spec.str()},
           {"measurement", args.measurement == BellVariant::Complete ? "complete" : "restricted"},
           {"outcomes", outcomes},
           {"f_closed", num(fidelity_closed_form(resource, args.m))},
           {"f_sim", num(sim.fidelity)},
           {"partial", sim.partial}};
  if (args.simulate == "mc") {
    const MonteCarloFidelity mc = fidelity_monte_carlo(config, args.samples, *args.seed, threads);
    out["mc"] = {{"mean", num(mc.mean)},
                 {"standard_error", num(mc.standard_error)},
                 {"samples", mc.samples},
                 {"seed", *args.seed}};
  }
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// paradox

std::string paradox_report(const ParadoxArgs& a) {
  if (a.n < 1 || a.n > 50) throw ParseError("--n", "n must lie in [1, 50]");
  for (const auto& [flag, v] : {std::pair{"--zeta", a.zeta}, {"--xi", a.xi}, {"--eta", a.eta}})
    if (!(v >= 0.0 && v <= 1.0)) throw ParseError(flag, "must lie in [0, 1]");
  const SwapParadoxReport r = swap_paradox(a.zeta, a.xi, a.eta, a.theta, a.phi, a.omega, a.n);
  json out{{"zeta", num(a.zeta)},
           {"xi", num(a.xi)},
           {"eta", num(a.eta)},
           {"theta", num(a.theta)},
           {"phi", num(a.phi)},
           {"omega", num(a.omega)},
           {"n", a.n},
           {"probability", num(r.probability)},
           {"negativity_xr", num(r.negativity_xr)},
           {"initial_negativity_xr", num(r.initial_negativity_xr)},
           {"particle_separable",
            {{"input", r.input_separable},
             {"resource", r.resource_separable},
             {"e0_target", r.target_separable},
             {"joint", r.joint_separable}}},
           {"notes", r.notes}};
  json amps = json::array();
  for (const auto& [occ, c] : r.post_state.amplitudes()) amps.push_back({occ.counts, num(c.real()), num(c.imag())});
  const json modes = json::array({json::array({"X", "up"}), json::array({"R", "down"})});
  out["post_state"] = {{"modes", modes}, {"amps", amps}};
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// reproduce-all

namespace {

struct Row {
  std::string quantity;
  double formula = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
  bool pass = true;
};

struct Table {
  std::string name;
  std::vector<Row> rows;
};

Row exact_row(std::string q, double formula, double numeric) {
  const double err = std::abs(formula - numeric);
  return {std::move(q), formula, numeric, err, err <= kTolerance};
}

std::string tag(std::initializer_list<std::pair<const char*, int>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += std::string(s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

StateVector random_psi(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> a(static_cast<std::size_t>(n + 1));
  for (auto& c : a) {
    const double re = g(rng);
    const double im = g(rng);
    c = {re, im};
  }
  return generic_two_mode(standard_pair(n), a, true);
}

double profile_negativity(const std::vector<Complex>& c) {
  double s = 0.0, n2 = 0.0;
  for (auto v : c) {
    s += std::abs(v);
    n2 += std::norm(v);
  }
  return (s * s / n2 - 1.0) / 2.0;
}

using Task = Table (*)(int);

Table qfi_two_fock(int nmax) {
  Table t{"qfi_two_fock", {}};
  for (int n = 1; n <= nmax; ++n) {
    const int l2 = n / 2;
    const auto pair = standard_pair(n);
    const double v = qfi(two_fock_superposition(pair, n, l2, 0.3, 0.9), Generator::nlr(pair));
    t.rows.push_back(exact_row("F " + tag({{"N", n}, {"l1", n}, {"l2", l2}}) + " xi=0.3",
                               closed_form_qfi(TwoFockQfi{n, l2, 0.3}), v));
  }
  return t;
}

Table qfi_uniform(int nmax) {
  Table t{"qfi_uniform", {}};
  for (int n = 1; n <= nmax; ++n) {
    const auto pair = standard_pair(n);
    const double v = qfi(uniform_state_linear(pair, 0.7), Generator::nlr(pair));
    t.rows.push_back(exact_row("F " + tag({{"N", n}}) + " slope=0.7", closed_form_qfi(UniformQfi{n}), v));
  }
  return t;
}

Table qfi_coherent(int nmax) {
  Table t{"qfi_coherent", {}};
  for (int n = 1; n <= nmax; ++n) {
    const auto pair = standard_pair(n);
    const double v = qfi(su2_coherent(pair, 0.3, 0.4), Generator::nlr(pair));
    t.rows.push_back(exact_row("F " + tag({{"N", n}}) + " xi=0.3", closed_form_qfi(CoherentQfi{n, 0.3}), v));
  }
  return t;
}

Table qfi_noon(int nmax) {
  Table t{"qfi_noon", {}};
  for (int n = 2; n <= nmax; ++n) {
    const auto pair = standard_pair(n);
    const double v = qfi(two_fock_superposition(pair, n, 0, 0.5, 0.0), Generator::nlr(pair));
    Row r = exact_row("F " + tag({{"N", n}}), static_cast<double>(n) * n, v);
    r.pass = r.pass && shot_noise_verdict(v, n) == NoiseVerdict::Heisenberg;
    t.rows.push_back(r);
  }
  return t;
}

Table qfi_fock_tlr(int nmax) {
  Table t{"qfi_fock_tlr", {}};
  for (int n = 1; n <= nmax; ++n)
    for (int l = 0; l <= n; ++l) {
      const auto pair = standard_pair(n);
      const double v = qfi(fock_state(pair, l), Generator::tlr(pair));
      t.rows.push_back(exact_row("F " + tag({{"N", n}, {"l", l}}), closed_form_qfi(FockTlrQfi{n, l}), v));
    }
  return t;
}

Table fidelity_fock(int nmax) {
  Table t{"fidelity_fock", {}};
  for (int n = 1; n <= nmax; ++n)
    for (int m = 0; m <= n; ++m) {
      const ProtocolConfig c{m, n, fock_state(TeleportModes::resource_spec(n), n / 2), BellVariant::Complete};
      t.rows.push_back(exact_row("f " + tag({{"N", n}, {"M", m}}), 2.0 / (m + 2.0), fidelity_simulated(c).fidelity));
    }
  return t;
}

Table fidelity_uniform(int nmax) {
  Table t{"fidelity_uniform", {}};
  for (int n = 1; n <= nmax; ++n)
    for (int m = 0; m <= n; ++m) {
      const ProtocolConfig c{m, n, uniform_state(TeleportModes::resource_spec(n)), BellVariant::Complete};
      t.rows.push_back(exact_row("f " + tag({{"N", n}, {"M", m}}), 1.0 - m / (3.0 * n + 3.0),
                                 fidelity_simulated(c).fidelity));
    }
  return t;
}

Table fidelity_coherent(int nmax) {
  Table t{"fidelity_coherent", {}};
  for (int n = 1; n <= nmax; ++n)
    for (int m = 0; m <= n; ++m) {
      const StateVector res = su2_coherent(TeleportModes::resource_spec(n), 0.5, 0.0);
      const ProtocolConfig c{m, n, res, BellVariant::Complete};
      t.rows.push_back(exact_row("f " + tag({{"N", n}, {"M", m}}), fidelity_closed_form(res, m),
                                 fidelity_simulated(c).fidelity));
    }
  return t;
}

// 1 - f(coh) must fall with N; the reference column holds the previous N.
Table fidelity_coherent_monotone(int nmax) {
  Table t{"fidelity_coherent_monotone", {}};
  for (int m = 1; m <= std::min(3, nmax - 1); ++m) {
    auto loss = [m](int n) {
      const ProtocolConfig c{m, n, su2_coherent(TeleportModes::resource_spec(n), 0.5, 0.0), BellVariant::Complete};
      return 1.0 - fidelity_simulated(c).fidelity;
    };
    double prev = loss(m);
    for (int n = m + 1; n <= nmax; ++n) {
      const double cur = loss(n);
      t.rows.push_back({"1-f " + tag({{"N", n}, {"M", m}}) + " below N-1", prev, cur, std::max(0.0, cur - prev),
                        cur < prev});
      prev = cur;
    }
  }
  return t;
}

Table nolabel_entropy(int nmax) {
  Table t{"nolabel_entropy", {}};
  for (int n = 2; n <= nmax; ++n) {
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<std::uint64_t>(n));
    std::vector<StateVector> draws;
    for (int d = 0; d < 10; ++d) draws.push_back(random_psi(n, rng));
    for (int k = 1; k < n; ++k) {
      double worst = 0.0;
      for (const auto& s : draws) worst = std::max(worst, entropy(nolabel_rho_n(s, SubspaceSpec{}, k)));
      t.rows.push_back(exact_row("max S(rho_n) " + tag({{"N", n}, {"n", k}}) + " over 10 states", 0.0, worst));
    }
  }
  return t;
}

Table paradox_negativity(int nmax) {
  Table t{"paradox_negativity", {}};
  for (int n = 1; n <= nmax; ++n) {
    const SwapParadoxReport r = swap_paradox(0.5, 0.5, 0.5, 0.0, 0.0, 0.0, n);
    const double ref = profile_negativity(swap_paradox_profile(0.5, 0.5, 0.5, 0.0, 0.0, 0.0, n));
    Row row = exact_row("negativity X|R " + tag({{"n", n}}) + " zeta=xi=eta=1/2", ref, r.negativity_xr);
    row.pass = row.pass && r.input_separable && r.resource_separable && r.target_separable;
    t.rows.push_back(row);
  }
  return t;
}

constexpr Task kTasks[] = {qfi_two_fock,      qfi_uniform,       qfi_coherent,
                           qfi_noon,          qfi_fock_tlr,      fidelity_fock,
                           fidelity_uniform,  fidelity_coherent, fidelity_coherent_monotone,
                           nolabel_entropy,   paradox_negativity};

}  // namespace

ReproduceResult reproduce_all(int nmax, Format format, unsigned threads) {
  if (nmax < 2 || nmax > 50) throw ParseError("--Nmax", "Nmax must lie in [2, 50]");
  const auto tables = parallel_map<Table>(std::size(kTasks), threads, [nmax](std::size_t i) { return kTasks[i](nmax); });

  ReproduceResult res;
  for (const auto& t : tables)
    for (const auto& r : t.rows) {
      res.all_pass = res.all_pass && r.pass;
      ++res.rows;
    }

  std::ostringstream out;
  if (format == Format::Csv) {
    out << "table,quantity,paper_formula_value,numeric_value,abs_error,pass\n";
    for (const auto& t : tables)
      for (const auto& r : t.rows)
        out << t.name << ',' << r.quantity << ',' << format_double(r.formula) << ',' << format_double(r.numeric) << ','
            << format_double(r.abs_error) << ',' << (r.pass ? "true" : "false") << '\n';
    res.text = out.str();
    return res;
  }
  json jt = json::array();
  for (const auto& t : tables) {
    json rows = json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"quantity", r.quantity},
                      {"paper_formula_value", num(r.formula)},
                      {"numeric_value", num(r.numeric)},
                      {"abs_error", num(r.abs_error)},
                      {"pass", r.pass}});
    jt.push_back({{"name", t.name}, {"rows", rows}});
  }
  res.text = json{{"Nmax", nmax}, {"all_pass", res.all_pass}, {"tables", jt}}.dump(2) + "\n";
  return res;
}

}  // namespace modeforge::cli
