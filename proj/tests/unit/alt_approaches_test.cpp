#include <map>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "modeforge/alt_approaches.hpp"
#include "modeforge/states.hpp"
#include "modeforge/teleport.hpp"

using namespace modeforge;

namespace {

const ModeRegistry kStd = ModeRegistry::standard();

StateVector random_psi(int n, std::mt19937_64& rng) {
  std::vector<Complex> a(static_cast<std::size_t>(n + 1));
  for (auto& c : a) c = oracle::gaussian_complex(rng);
  return generic_two_mode(standard_pair(n), a, true);
}

using Entries = std::map<std::pair<FockOccupation, FockOccupation>, Complex>;

Entries entries(const DensityMatrix& rho) {
  Entries out;
  for (std::size_t i = 0; i < rho.basis.size(); ++i)
    for (std::size_t j = 0; j < rho.basis.size(); ++j)
      out[{rho.basis[i], rho.basis[j]}] = rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

double max_difference(const DensityMatrix& a, const DensityMatrix& b) {
  Entries ea = entries(a), eb = entries(b);
  double worst = 0.0;
  for (const auto& [key, v] : ea) worst = std::max(worst, std::abs(v - (eb.count(key) ? eb[key] : Complex{})));
  for (const auto& [key, v] : eb) worst = std::max(worst, std::abs(v - (ea.count(key) ? ea[key] : Complex{})));
  return worst;
}

// Fixes the global phase on the largest component, then compares.
double profile_distance(std::vector<Complex> a, std::vector<Complex> b) {
  auto settle = [](std::vector<Complex>& v) {
    std::size_t big = 0;
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      norm += std::norm(v[i]);
      if (std::abs(v[i]) > std::abs(v[big])) big = i;
    }
    const Complex ph = std::abs(v[big]) > 0 ? std::conj(v[big]) / std::abs(v[big]) : Complex(1.0);
    for (auto& c : v) c *= ph / std::sqrt(norm);
  };
  settle(a);
  settle(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<Complex> post_amplitudes(const StateVector& post, int n) {
  std::vector<Complex> out;
  for (int k = 0; k <= n; ++k) out.push_back(post.amplitude(FockOccupation{k, n - k}));
  return out;
}

}  // namespace

TEST_CASE("rho_n_is_pure_for_two_mode_states") {
  std::mt19937_64 rng(61);
  for (int n = 2; n <= 8; ++n)
    for (int t = 0; t < 10; ++t) {
      const StateVector psi = random_psi(n, rng);
      for (int r = 1; r < n; ++r) {
        const DensityMatrix rho = nolabel_rho_n(psi, SubspaceSpec{}, r);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
        CHECK(std::abs(rho.purity() - 1.0) < 1e-9);
        CHECK(entropy(rho) < 1e-9);
        for (const auto& occ : rho.basis) CHECK(occ[0] + occ[1] + occ[2] + occ[3] == n - r);
      }
    }
}

TEST_CASE("rho_n_matches_the_direct_projector") {
  // Removing r particles from (L,up) leaves sum_l alpha_l sqrt(l!/(l-r)!) |l-r, N-l>.
  std::mt19937_64 rng(62);
  const int n = 5, r = 2;
  const StateVector psi = random_psi(n, rng);
  const auto alpha = two_mode_amplitudes(psi, standard_pair(n));
  StateVector::AmplitudeMap amps;
  for (int l = r; l <= n; ++l)
    amps[FockOccupation{l - r, 0, 0, n - l}] = alpha[l] * std::sqrt(factorial(l) / factorial(l - r));
  const StateVector want(kStd, amps);
  CHECK(max_difference(nolabel_rho_n(psi, SubspaceSpec{}, r), projector(want)) < 1e-9);
}

TEST_CASE("rho_n_is_independent_of_the_subspace_basis") {
  std::mt19937_64 rng(63);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 4; ++t) {
      const StateVector psi = random_psi(n, rng);
      SubspaceSpec rotated;
      rotated.basis = oracle::random_unitary(2, rng);
      for (int r = 1; r <= n; ++r) {
        CHECK(max_difference(nolabel_rho_n(psi, SubspaceSpec{}, r), nolabel_rho_n(psi, rotated, r)) < 1e-9);
      }
    }
}

TEST_CASE("rho_n_errors") {
  const StateVector f = fock_state(standard_pair(3), 0);
  CHECK_THROWS_AS(nolabel_rho_n(f, SubspaceSpec{}, 0), DomainError);
  CHECK_THROWS_AS(nolabel_rho_n(f, SubspaceSpec{}, 4), DomainError);
  // All three particles sit in (R,down), outside K.
  CHECK_THROWS_AS(nolabel_rho_n(f, SubspaceSpec{}, 1), UndefinedReductionError);
  SubspaceSpec bad;
  bad.modes = {{"Q", Internal::Up}};
  CHECK_THROWS_AS(nolabel_rho_n(f, bad, 1), UsageError);
  SubspaceSpec skew;
  skew.basis = Eigen::MatrixXcd::Constant(2, 2, 1.0);
  CHECK_THROWS_AS(nolabel_rho_n(f, skew, 1), UsageError);
}

TEST_CASE("local_operator_examples") {
  const ModeId lu{"L", Internal::Up}, ld{"L", Internal::Down};
  const LadderPolynomial nl = LadderPolynomial::number(kStd, lu) + LadderPolynomial::number(kStd, ld);
  CHECK(approx_equal(nolabel_local_operator(Eigen::MatrixXcd::Identity(2, 2), "L", 1, kStd), nl));
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(2, 2);
  up(0, 0) = 1.0;
  CHECK(approx_equal(nolabel_local_operator(up, "L", 1, kStd), LadderPolynomial::number(kStd, lu)));
  Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(2, 2);
  flip(0, 1) = 1.0;
  CHECK(approx_equal(nolabel_local_operator(flip, "L", 1, kStd),
                     LadderPolynomial::creator(kStd, lu) * LadderPolynomial::annihilator(kStd, ld)));
  // Identity on two particles counts ordered pairs: N_L (N_L - 1).
  CHECK(approx_equal(nolabel_local_operator(Eigen::MatrixXcd::Identity(4, 4), "L", 2, kStd),
                     nl * nl - nl));
  CHECK_THROWS_AS(nolabel_local_operator(up, "L", 0, kStd), DomainError);
  CHECK_THROWS_AS(nolabel_local_operator(up, "L", 2, kStd), UsageError);
}

TEST_CASE("local_operators_commute_with_the_other_site") {
  std::mt19937_64 rng(64);
  const ModeId ru{"R", Internal::Up}, rd{"R", Internal::Down};
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 2;
    const Eigen::MatrixXcd o = oracle::random_unitary(Eigen::Index{1} << n, rng);
    const LadderPolynomial a = nolabel_local_operator(o, "L", n, kStd);
    CHECK(is_site_local(a, "L"));
    CHECK_FALSE(is_site_local(a, "R"));
    const LadderPolynomial b = oracle::gaussian_complex(rng) * LadderPolynomial::creator(kStd, ru) *
                                   LadderPolynomial::annihilator(kStd, rd) +
                               oracle::gaussian_complex(rng) * LadderPolynomial::number(kStd, ru);
    for (int p = 0; p <= 3; ++p) {
      const StateVector s = oracle::random_sector_state(kStd, p, rng);
      const StateVector ab = apply_ladder(a, apply_ladder(b, s));
      const StateVector ba = apply_ladder(b, apply_ladder(a, s));
      CHECK((ab - ba).norm() < 1e-9);
    }
  }
}

TEST_CASE("particle_separability_examples") {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t)
    CHECK(particle_separability_verdict(su2_coherent(standard_pair(1 + t % 6), u(rng), 6.0 * u(rng))));
  CHECK_FALSE(particle_separability_verdict(two_fock_superposition(standard_pair(2), 2, 0, 0.5, 0.0)));
  CHECK_FALSE(particle_separability_verdict(fock_state(standard_pair(2), 1)));
  CHECK(particle_separability_verdict(fock_state(standard_pair(3), 3)));
  const StateVector joint = joint_state(su2_coherent(TeleportModes::input_spec(2), 0.5, 0.0),
                                        su2_coherent(TeleportModes::resource_spec(2), 0.5, 0.0));
  CHECK_FALSE(particle_separability_verdict(joint));
}

TEST_CASE("swap_paradox_example") {
  const SwapParadoxReport r = swap_paradox(0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 2);
  CHECK(r.input_separable);
  CHECK(r.resource_separable);
  CHECK(r.target_separable);
  CHECK_FALSE(r.joint_separable);
  CHECK(r.initial_negativity_xr < 1e-12);
  CHECK(r.negativity_xr > 0.1);
  CHECK(r.post_state.is_normalized());
  CHECK(r.post_state.registry() == TeleportModes::output());

  // Oracle: Schmidt coefficients of the post state are its |amplitudes|.
  const auto amp = post_amplitudes(r.post_state, 2);
  double s = 0.0;
  for (const auto& c : amp) s += std::abs(c);
  CHECK(std::abs(r.negativity_xr - (s * s - 1.0) / 2.0) < 1e-12);
  CHECK(r.probability == doctest::Approx(0.15625).epsilon(1e-12));
}

TEST_CASE("swap_paradox_profile_matches_the_expansion") {
  // C(N,k)^2 (eta(1-xi)(1-zeta))^{(N-k)/2} (xi zeta (1-eta))^{k/2} on
  // (a_X^dag)^k (a_R^dag)^{N-k}|vac>, converted to Fock amplitudes.
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 6;
    const double zeta = u(rng), xi = u(rng), eta = u(rng);
    std::vector<Complex> want;
    for (int k = 0; k <= n; ++k)
      want.emplace_back(binomial(n, k) * binomial(n, k) * std::pow(eta * (1 - xi) * (1 - zeta), 0.5 * (n - k)) *
                        std::pow(xi * zeta * (1 - eta), 0.5 * k) * std::sqrt(factorial(k) * factorial(n - k)));
    const SwapParadoxReport r = swap_paradox(zeta, xi, eta, 0.0, 0.0, 0.0, n);
    CHECK(profile_distance(post_amplitudes(r.post_state, n), want) < 1e-9);
  }
}

TEST_CASE("swap_paradox_with_phases_matches_a_brute_force_projection") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 5;
    const double zeta = u(rng), xi = u(rng), eta = u(rng);
    const double theta = 6.0 * u(rng), phi = 6.0 * u(rng), omega = 6.0 * u(rng);
    const StateVector joint = joint_state(su2_coherent(TeleportModes::input_spec(n), zeta, theta),
                                          su2_coherent(TeleportModes::resource_spec(n), xi, phi));
    const StateVector target = swap_target(eta, omega, n);
    // <target| on (Y,L) summed by hand over the joint occupations (X,Y,L,R).
    std::vector<Complex> brute(static_cast<std::size_t>(n + 1));
    for (const auto& [occ, a] : joint.amplitudes())
      if (occ[1] + occ[2] == n && occ[0] + occ[3] == n)
        brute[static_cast<std::size_t>(occ[0])] += std::conj(target.amplitude(FockOccupation{occ[1], occ[2]})) * a;
    const SwapParadoxReport r = swap_paradox(zeta, xi, eta, theta, phi, omega, n);
    CHECK(profile_distance(post_amplitudes(r.post_state, n), brute) < 1e-9);
    double p = 0.0;
    for (const auto& c : brute) p += std::norm(c);
    CHECK(std::abs(r.probability - p) < 1e-12);
    CHECK(profile_distance(swap_paradox_profile(zeta, xi, eta, theta, phi, omega, n), brute) < 1e-9);
  }
}

TEST_CASE("swap_paradox_edge_cases") {
  // Resource entirely in (R,down): a single term survives.
  const SwapParadoxReport r = swap_paradox(0.5, 0.0, 0.5, 0.3, 0.2, 0.1, 3);
  CHECK(r.negativity_xr < 1e-12);
  CHECK(r.post_state.support_size() == 1);
  CHECK_THROWS_AS(swap_paradox(1.5, 0.5, 0.5, 0, 0, 0, 2), DomainError);
  CHECK_THROWS_AS(swap_paradox(0.5, -0.5, 0.5, 0, 0, 0, 2), DomainError);
  CHECK_THROWS_AS(swap_paradox(0.5, 0.5, 0.5, 0, 0, 0, 0), DomainError);
  // zeta = xi = 0 puts everything on (Y,R); eta = 0 targets (L,up) only.
  CHECK_THROWS_AS(swap_paradox(0.0, 0.0, 0.0, 0, 0, 0, 2), UndefinedReductionError);
}

TEST_CASE("e0_is_a_projector") {
  std::mt19937_64 rng(68);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 4;
    const double eta = u(rng), omega = 6.0 * u(rng);
    const StateVector joint = joint_state(oracle::random_sector_state(TeleportModes::input(), n, rng).normalized(),
                                          su2_coherent(TeleportModes::resource_spec(n), u(rng), 6.0 * u(rng)));
    const StateVector once = apply_e0(joint, eta, omega, n);
    const StateVector twice = apply_e0(once, eta, omega, n);
    CHECK((once - twice).norm() < 1e-12);
    CHECK(once.norm() <= joint.norm() + 1e-12);
    CHECK(swap_target(eta, omega, n).is_normalized());
  }
}
