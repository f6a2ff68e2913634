// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli/reports.hpp"
#include "dense_oracle.hpp"
#include "modeforge/alt_approaches.hpp"
#include "modeforge/entanglement.hpp"
#include "modeforge/metrology.hpp"
#include "modeforge/teleport.hpp"

using namespace modeforge;

namespace {

const ModeRegistry kStd = ModeRegistry::standard();
const ModeId kLu{"L", Internal::Up};
const ModeId kLd{"L", Internal::Down};
const ModeId kRu{"R", Internal::Up};
const ModeId kRd{"R", Internal::Down};
const std::vector<ModeId> kLeft{kLu, kLd};
const std::vector<ModeId> kRight{kRu, kRd};

// Accumulates the worst deviation and any failed predicate.
class Tally {
 public:
  void near(double got, double want, double tol) {
    const double err = std::abs(got - want);
    worst_ = std::max(worst_, err);
    if (!(err <= tol)) ok_ = false;
    ++cases_;
  }
  void that(bool cond) {
    if (!cond) ok_ = false;
    ++cases_;
  }
  bool ok() const { return ok_; }
  int cases() const { return cases_; }
  std::string detail() const {
    std::ostringstream out;
    out << cases_ << " checks, max abs error " << worst_;
    return out.str();
  }

 private:
  bool ok_ = true;
  int cases_ = 0;
  double worst_ = 0.0;
};

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXcd random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = oracle::gaussian_complex(rng);
  return m;
}

Eigen::MatrixXcd random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  const Eigen::MatrixXcd m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

StateVector random_psi(int n, std::mt19937_64& rng) {
  std::vector<Complex> a(static_cast<std::size_t>(n + 1));
  for (auto& c : a) c = oracle::gaussian_complex(rng);
  return generic_two_mode(standard_pair(n), a, true);
}

Outcome qfi_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Tally t;
  for (int n = 1; n <= 20; ++n) {
    const auto spec = standard_pair(n);
    const Generator g = Generator::nlr(spec);
    for (int d = 0; d < 20; ++d) {
      const double xi = u(rng), phi = 2.0 * M_PI * u(rng);
      const int l1 = static_cast<int>(u(rng) * (n + 1)) % (n + 1);
      const int l2 = (l1 + 1 + static_cast<int>(u(rng) * n) % n) % (n + 1);
      t.near(qfi(two_fock_superposition(spec, l1, l2, xi, phi), g), 4 * xi * (1 - xi) * (l1 - l2) * (l1 - l2), 1e-9);
      std::vector<double> phases(static_cast<std::size_t>(n + 1));
      for (auto& p : phases) p = 2.0 * M_PI * u(rng);
      t.near(qfi(uniform_state(spec, phases), g), (n * n + 2.0 * n) / 3.0, 1e-9);
      t.near(qfi(su2_coherent(spec, xi, phi), g), 4 * xi * (1 - xi) * n, 1e-9);
    }
  }
  const double secs = seconds_since(t0);
  return {t.ok() && secs < 10.0, t.detail() + ", " + std::to_string(secs) + " s"};
}

Outcome noon_heisenberg() {
  Tally t;
  for (int n = 2; n <= 10; ++n) {
    const auto spec = standard_pair(n);
    const double f = qfi(two_fock_superposition(spec, n, 0, 0.5, 0.0), Generator::nlr(spec));
    t.near(f, double(n) * n, 1e-9);
    t.that(shot_noise_verdict(f, n) == NoiseVerdict::Heisenberg);
  }
  return {t.ok(), t.detail()};
}

Outcome separable_nullity() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> occ(0, 5);
  Tally t;
  const Generator g = Generator::nlr(standard_pair(1));
  for (int i = 0; i < 100; ++i) {
    const StateVector s = basis_state(kStd, FockOccupation{occ(rng), occ(rng), occ(rng), occ(rng)});
    t.that(is_mode_separable(s, Bipartition::named(kStd, "LR")));
    t.near(qfi(s, g), 0.0, 1e-9);
  }
  return {t.ok(), t.detail()};
}

Outcome nonlocal_interferometer() {
  Tally t;
  for (int n = 0; n <= 12; ++n) {
    const Generator g = Generator::tlr(standard_pair(n));
    for (int l = 0; l <= n; ++l) {
      const double f = qfi(fock_state(standard_pair(n), l), g);
      t.near(f, n + 2.0 * l * (n - l), 1e-9);
      if (l == 0 || l == n) t.near(f, n, 1e-9);
      if (2 * l == n) t.near(f, n * n / 2.0 + n, 1e-9);
    }
  }
  return {t.ok(), t.detail()};
}

std::vector<std::pair<std::string, StateVector>> resource_families(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const TwoModeSpec spec = TeleportModes::resource_spec(n);
  std::vector<std::pair<std::string, StateVector>> out;
  out.emplace_back("fock", fock_state(spec, n / 2));
  out.emplace_back("unif", uniform_state(spec));
  out.emplace_back("coh", su2_coherent(spec, u(rng), 0.0));
  out.emplace_back("twofock", two_fock_superposition(spec, n, n / 3, u(rng), 0.0));
  return out;
}

Outcome fidelity_sim_vs_closed() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1005);
  Tally t;
  for (int n = 1; n <= 8; ++n)
    for (const auto& [name, r] : resource_families(n, rng))
      for (int m = 0; m <= n; ++m) {
        const SimulatedFidelity s = fidelity_simulated({m, n, r, BellVariant::Complete});
        t.that(!s.partial);
        t.near(s.fidelity, fidelity_closed_form(r, m), 1e-9);
      }
  const double secs = seconds_since(t0);
  return {t.ok() && secs < 60.0, t.detail() + ", " + std::to_string(secs) + " s"};
}

Outcome fidelity_golden() {
  Tally t;
  for (int n = 1; n <= 12; ++n)
    for (int m = 0; m <= n; ++m) {
      const TwoModeSpec spec = TeleportModes::resource_spec(n);
      t.near(fidelity_closed_form(fock_state(spec, n / 2), m), 2.0 / (m + 2.0), 1e-12);
      t.near(fidelity_closed_form(uniform_state(spec), m), 1.0 - m / (3.0 * n + 3.0), 1e-12);
      if (n <= 8) {
        t.near(fidelity_simulated({m, n, fock_state(spec, n / 2), BellVariant::Complete}).fidelity, 2.0 / (m + 2.0),
               1e-12);
        t.near(fidelity_simulated({m, n, uniform_state(spec), BellVariant::Complete}).fidelity,
               1.0 - m / (3.0 * n + 3.0), 1e-12);
      }
    }
  for (int m = 1; m <= 4; ++m) {
    double prev = 1.0;
    for (int n = m; n <= 40; ++n) {
      const double loss = 1.0 - fidelity_closed_form(su2_coherent(TeleportModes::resource_spec(n), 0.5, 0.0), m);
      t.that(loss < prev);
      prev = loss;
    }
  }
  return {t.ok(), t.detail()};
}

Outcome bell_soundness() {
  std::mt19937_64 rng(1007);
  Tally t;
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= n; ++m) {
      const auto labels = bell_labels(m, n, BellVariant::Complete);
      t.that(labels.size() == static_cast<std::size_t>((m + 1) * (n + 1)));
      std::vector<StateVector> basis;
      for (const auto& [l, la] : labels)
        basis.push_back(embed(bell_state(l, la, m, n, BellVariant::Complete), TeleportModes::bell()));
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
          t.near(std::abs(inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)), 0.0, 1e-9);

      std::vector<Complex> a(static_cast<std::size_t>(n + 1));
      for (auto& c : a) c = oracle::gaussian_complex(rng);
      const ProtocolConfig c{m, n, generic_two_mode(TeleportModes::resource_spec(n), a, true), BellVariant::Complete};
      double total = 0.0;
      for (const auto& o : bell_measure(joint_state(random_input(m, rng), c.resource), c)) total += o.probability;
      t.near(total, 1.0, 1e-9);

      const double frac = double(bell_labels(m, n, BellVariant::Restricted).size()) / double(labels.size());
      t.near(frac, (n - m + 1.0) / (n + 1.0), 1e-12);
    }
  return {t.ok(), t.detail()};
}

Outcome nolabel_zero_entropy() {
  std::mt19937_64 rng(1008);
  Tally t;
  for (int n = 2; n <= 8; ++n)
    for (int i = 0; i < 10; ++i) {
      const StateVector psi = random_psi(n, rng);
      SubspaceSpec rotated;
      rotated.basis = oracle::random_unitary(2, rng);
      for (int r = 1; r < n; ++r) {
        const DensityMatrix rho = nolabel_rho_n(psi, SubspaceSpec{}, r);
        t.near(entropy(rho), 0.0, 1e-9);
        t.near(rho.purity(), 1.0, 1e-9);
        const DensityMatrix rot = nolabel_rho_n(psi, rotated, r);
        t.near(entropy(rot), 0.0, 1e-9);
        t.that(rot.basis == rho.basis);
        if (rot.basis == rho.basis) t.near((rot.matrix - rho.matrix).cwiseAbs().maxCoeff(), 0.0, 1e-9);
      }
    }
  return {t.ok(), t.detail()};
}

Outcome swapping_paradox() {
  Tally t;
  const int n = 2;
  const SwapParadoxReport r = swap_paradox(0.5, 0.5, 0.5, 0.0, 0.0, 0.0, n);
  t.that(r.negativity_xr > 0.1);
  t.that(r.input_separable && r.resource_separable && r.target_separable);
  t.near(r.initial_negativity_xr, 0.0, 1e-9);
  // C(N,k)^2 (1/8)^{(N-k)/2} (1/8)^{k/2} on (a_X^dag)^k (a_R^dag)^{N-k}|vac>.
  std::vector<double> want;
  double norm = 0.0;
  for (int k = 0; k <= n; ++k) {
    want.push_back(binomial(n, k) * binomial(n, k) * std::pow(0.125, 0.5 * n) *
                   std::sqrt(factorial(k) * factorial(n - k)));
    norm += want.back() * want.back();
  }
  const Complex ref = r.post_state.amplitude(FockOccupation{n, 0});
  const Complex phase = ref / std::abs(ref);
  for (int k = 0; k <= n; ++k)
    t.near(std::abs(r.post_state.amplitude(FockOccupation{k, n - k}) / phase - want[k] / std::sqrt(norm)), 0.0, 1e-9);
  std::ostringstream d;
  d << t.detail() << ", negativity " << r.negativity_xr;
  return {t.ok(), d.str()};
}

LadderPolynomial random_poly(const ModeRegistry& reg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pw(0, 2);
  LadderPolynomial p(reg);
  for (int term = 0; term < 3; ++term) {
    Monomial m{std::vector<int>(reg.size()), std::vector<int>(reg.size())};
    for (std::size_t i = 0; i < reg.size(); ++i) {
      m.create[i] = pw(rng);
      m.annihilate[i] = pw(rng);
    }
    p += LadderPolynomial::monomial(reg, m, oracle::gaussian_complex(rng));
  }
  return p;
}

LadderPolynomial random_creator_poly(const std::vector<ModeId>& modes, int k, std::mt19937_64& rng) {
  LadderPolynomial p = LadderPolynomial::identity(kStd);
  for (int i = 0; i < k; ++i) {
    LadderPolynomial lin(kStd);
    for (const auto& m : modes) lin += oracle::gaussian_complex(rng) * LadderPolynomial::creator(kStd, m);
    p = p * lin;
  }
  return p;
}

Outcome algebraic_suite() {
  std::mt19937_64 rng(1010);
  Tally ccr, adj, eq, comm, sep;
  const ModeRegistry reg({kLu, kLd, kRu});
  while (ccr.cases() < 200) {
    const StateVector psi = oracle::random_sector_state(reg, static_cast<int>(rng() % 4), rng);
    for (const auto& m : reg.modes())
      for (const auto& mp : reg.modes()) {
        const auto a = LadderPolynomial::annihilator(reg, m);
        const auto ad = LadderPolynomial::creator(reg, mp);
        const StateVector lhs = apply_ladder(a * ad, psi) - apply_ladder(ad * a, psi);
        ccr.near((lhs - (m == mp ? 1.0 : 0.0) * psi).norm(), 0.0, 1e-9);
      }
  }
  for (int i = 0; i < 200; ++i) {
    const LadderPolynomial p = random_poly(reg, rng);
    StateVector phi(reg), psi(reg);
    for (int n = 0; n <= 3; ++n) {
      phi = phi + oracle::random_sector_state(reg, n, rng);
      psi = psi + oracle::random_sector_state(reg, n, rng);
    }
    const Complex rhs = inner(phi, apply_ladder(p, psi));
    adj.near(std::abs(inner(apply_ladder(p.adjoint(), phi), psi) - rhs) / (1.0 + std::abs(rhs)), 0.0, 1e-9);
  }
  for (int i = 0; i < 200; ++i) {
    const Eigen::MatrixXcd x = random_hermitian(2, rng), y = random_hermitian(2, rng);
    const LadderPolynomial xs = second_quantize(kStd, kLeft, x);
    const LadderPolynomial ys = second_quantize(kStd, kRight, y);
    eq.near((symmetrized_observable(kStd, kLeft, x, kRight, y) - xs * ys).max_abs_coefficient(), 0.0, 1e-9);
    comm.near(commutator(xs, ys).max_abs_coefficient(), 0.0, 1e-9);
  }
  const Bipartition lr = Bipartition::named(kStd, "LR");
  while (sep.cases() < 400) {
    const StateVector s = apply_ladder(random_creator_poly(kLeft, static_cast<int>(rng() % 3), rng) *
                                           random_creator_poly(kRight, 1 + static_cast<int>(rng() % 2), rng),
                                       vacuum(kStd))
                              .normalized();
    const LadderPolynomial o1 =
        LadderPolynomial::identity(kStd, 1.5) + second_quantize(kStd, kLeft, random_matrix(2, rng));
    const LadderPolynomial o2 =
        LadderPolynomial::identity(kStd, 1.5) + second_quantize(kStd, kRight, random_matrix(2, rng));
    const StateVector out = apply_ladder(o1 * o2, s);
    if (out.norm() < 1e-6) continue;
    const StateVector v = out.normalized();
    sep.that(schmidt_rank(v, lr) == 1);
    sep.near(factorization_witness(v, lr, second_quantize(kStd, kLeft, random_hermitian(2, rng)),
                                   second_quantize(kStd, kRight, random_hermitian(2, rng))),
             0.0, 1e-9);
  }
  std::ostringstream d;
  d << "ccr " << ccr.cases() << ", adjoint " << adj.cases() << ", product " << eq.cases() << ", commutator "
    << comm.cases() << ", separability " << sep.cases() / 2;
  return {ccr.ok() && adj.ok() && eq.ok() && comm.ok() && sep.ok(), d.str()};
}

Outcome witness_reproduction() {
  Tally t;
  const StateVector psi =
      apply_ladder(LadderPolynomial::creator(kStd, kLu) * LadderPolynomial::creator(kStd, kRd), vacuum(kStd));
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(1, 1);
  const double w = particle_label_witness(psi, {kLu}, one, {kRd}, one);
  t.near(w, 0.25, 1e-12);
  // Labelled two-particle check over span{chi, phi}.
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = v(2) = 1 / std::sqrt(2.0);
  Eigen::MatrixXcd p_chi = Eigen::MatrixXcd::Zero(2, 2), p_phi = p_chi;
  p_chi(0, 0) = 1.0;
  p_phi(1, 1) = 1.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const Complex joint = v.dot(oracle::kron(p_chi, p_phi) * v);
  const Complex prod = v.dot(oracle::kron(p_chi, id) * v) * v.dot(oracle::kron(id, p_phi) * v);
  t.near(std::abs(joint - 0.5), 0.0, 1e-15);
  t.near(std::abs(prod - 0.25), 0.0, 1e-15);
  return {t.ok(), "witness " + cli::format_double(w)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Tally t;
  const auto a = cli::reproduce_all(8, cli::Format::Csv, 1);
  const auto b = cli::reproduce_all(8, cli::Format::Csv, 1);
  const auto c = cli::reproduce_all(8, cli::Format::Csv, 8);
  t.that(a.all_pass);
  t.that(a.text == b.text);
  t.that(a.text == c.text);

  std::vector<std::string> outputs;
  for (const char* threads : {"1", "1", "8"}) {
    const std::string path = std::string("reproduce_t") + threads + "_" + std::to_string(outputs.size()) + ".csv";
    const std::string cmd = std::string("\"") + MODEFORGE_BIN + "\" reproduce-all --Nmax 8 --threads " + threads +
                            " -o " + path;
    t.that(std::system(cmd.c_str()) == 0);
    outputs.push_back(slurp(path));
    std::remove(path.c_str());
  }
  t.that(!outputs[0].empty());
  t.that(outputs[0] == outputs[1]);
  t.that(outputs[0] == outputs[2]);
  t.that(outputs[0] == a.text);
  return {t.ok(), std::to_string(a.rows) + " rows, " + std::to_string(outputs[0].size()) + " bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"qfi_closed_forms", qfi_closed_forms},
      {"noon_heisenberg_limit", noon_heisenberg},
      {"separable_input_nullity", separable_nullity},
      {"nonlocal_interferometer", nonlocal_interferometer},
      {"fidelity_simulation_vs_closed_form", fidelity_sim_vs_closed},
      {"fidelity_golden_values", fidelity_golden},
      {"bell_basis_soundness", bell_soundness},
      {"nolabel_zero_entropy", nolabel_zero_entropy},
      {"swapping_paradox", swapping_paradox},
      {"algebraic_property_suite", algebraic_suite},
      {"witness_reproduction", witness_reproduction},
      {"reproduce_all_determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << ' ' << criteria[i].first << " (" << o.detail << ")"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
