#include "modeforge/alt_approaches.hpp"

#include <cmath>
#include <map>
#include <set>

#include "modeforge/states.hpp"
#include "modeforge/teleport.hpp"

namespace modeforge {

void SubspaceSpec::validate(const ModeRegistry& reg) const {
  if (modes.empty()) throw UsageError("single-particle subspace needs at least one mode");
  std::set<ModeId> seen;
  for (const auto& m : modes) {
    if (!reg.contains(m)) throw UsageError("subspace mode " + m.label() + " not in registry");
    if (!seen.insert(m).second) throw UsageError("subspace lists mode " + m.label() + " twice");
  }
  if (basis) {
    const auto p = static_cast<Eigen::Index>(modes.size());
    if (basis->rows() != p || basis->cols() != p) throw UsageError("subspace basis has the wrong size");
    if (!(basis->adjoint() * *basis).isIdentity(kTolerance)) throw UsageError("subspace basis is not unitary");
  }
}

namespace {

void compositions(int n, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = n; k >= 0; --k) {
    cur.push_back(k);
    compositions(n - k, parts, cur, out);
    cur.pop_back();
  }
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

DensityMatrix nolabel_rho_n(const StateVector& state, const SubspaceSpec& k, int n) {
  const ModeRegistry& reg = state.registry();
  k.validate(reg);
  if (!state.sector()) throw UsageError("rho^(n) needs a fixed particle number");
  if (n < 1 || n > *state.sector()) throw DomainError("n must lie in [1, N]");

  const std::size_t p = k.modes.size();
  std::vector<LadderPolynomial> lower;
  for (std::size_t j = 0; j < p; ++j) {
    LadderPolynomial a(reg);
    for (std::size_t m = 0; m < p; ++m) {
      const Complex u = k.basis ? (*k.basis)(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j))
                                : Complex(m == j ? 1.0 : 0.0);
      if (std::abs(u) > 0.0) a += std::conj(u) * LadderPolynomial::annihilator(reg, k.modes[m]);
    }
    lower.push_back(std::move(a));
  }

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(n, p, cur, comps);

  std::vector<StateVector> removed;
  double denom = 0.0;
  for (const auto& c : comps) {
    StateVector v = state;
    for (std::size_t j = 0; j < p; ++j)
      for (int t = 0; t < c[j]; ++t) v = apply_ladder(lower[j], v);
    denom += v.squared_norm();
    if (!v.is_zero()) removed.push_back(std::move(v));
  }
  if (denom <= kPruneTolerance) throw UndefinedReductionError("no support left after removing n particles from K");

  std::set<FockOccupation> occs;
  for (const auto& v : removed)
    for (const auto& [occ, a] : v.amplitudes()) occs.insert(occ);
  DensityMatrix rho{reg, {occs.begin(), occs.end()}, {}};
  std::map<FockOccupation, Eigen::Index> index;
  for (std::size_t i = 0; i < rho.basis.size(); ++i) index.emplace(rho.basis[i], static_cast<Eigen::Index>(i));
  const auto dim = static_cast<Eigen::Index>(rho.basis.size());
  rho.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& v : removed) {
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(dim);
    for (const auto& [occ, a] : v.amplitudes()) col(index.at(occ)) = a;
    rho.matrix += col * col.adjoint();
  }
  rho.matrix /= denom;
  return rho;
}

LadderPolynomial nolabel_local_operator(const Eigen::MatrixXcd& o, const std::string& spatial, int n,
                                        const ModeRegistry& reg) {
  if (n < 1) throw DomainError("local operator needs n >= 1");
  if (n > 20) throw DomainError("local operator size 2^n is capped at n = 20");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (o.rows() != dim || o.cols() != dim) throw UsageError("operator must be 2^n x 2^n");
  const std::size_t up = reg.index_of({spatial, Internal::Up});
  const std::size_t down = reg.index_of({spatial, Internal::Down});

  auto ups = [n](Eigen::Index bits) {
    int c = 0;
    for (int j = 0; j < n; ++j) c += ((bits >> j) & 1) == 0;
    return c;
  };
  LadderPolynomial out(reg);
  for (Eigen::Index s = 0; s < dim; ++s)
    for (Eigen::Index t = 0; t < dim; ++t) {
      if (std::abs(o(s, t)) < kPruneTolerance) continue;
      Monomial mono{std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)};
      mono.create[up] = ups(s);
      mono.create[down] = n - ups(s);
      mono.annihilate[up] = ups(t);
      mono.annihilate[down] = n - ups(t);
      out += LadderPolynomial::monomial(reg, mono, o(s, t));
    }
  return out;
}

bool is_site_local(const LadderPolynomial& op, const std::string& spatial) {
  for (std::size_t i : op.support())
    if (op.registry()[i].spatial != spatial) return false;
  return true;
}

bool particle_separability_verdict(const StateVector& state) {
  if (!state.sector()) throw UsageError("particle separability needs a fixed particle number");
  if (*state.sector() == 0) return true;
  const Eigen::MatrixXcd gamma = one_body_density(state);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gamma + gamma.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return std::abs(ev(ev.size() - 1) - *state.sector()) <= kTolerance * *state.sector();
}

StateVector swap_target(double eta, double omega, int n) {
  check_unit(eta, "eta");
  const TwoModeSpec spec{TeleportModes::bell(), TeleportModes::y(), TeleportModes::l(), n};
  return su2_coherent(spec, eta, omega);
}

StateVector apply_e0(const StateVector& joint, double eta, double omega, int n) {
  const StateVector target = swap_target(eta, omega, n);
  const StateVector rest = partial_inner(target, joint);
  if (rest.is_zero()) return StateVector(joint.registry(), joint.sector());
  return embed(tensor_product(target, rest), joint.registry());
}

std::vector<Complex> swap_paradox_profile(double zeta, double xi, double eta, double theta,
                                          double phi, double omega, int n) {
  std::vector<Complex> out(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const double mag = std::pow(binomial(n, k), 1.5) * std::pow(zeta * xi * (1.0 - eta), 0.5 * k) *
                       std::pow((1.0 - zeta) * (1.0 - xi) * eta, 0.5 * (n - k));
    out[static_cast<std::size_t>(k)] = std::polar(mag, (theta + phi) * (n - k) - omega * k);
  }
  return out;
}

SwapParadoxReport swap_paradox(double zeta, double xi, double eta, double theta, double phi,
                               double omega, int n) {
  check_unit(zeta, "zeta");
  check_unit(xi, "xi");
  check_unit(eta, "eta");
  if (n < 1) throw DomainError("n must be at least 1");

  const StateVector input = su2_coherent(TeleportModes::input_spec(n), zeta, theta);
  const StateVector resource = su2_coherent(TeleportModes::resource_spec(n), xi, phi);
  const StateVector target = swap_target(eta, omega, n);
  const StateVector joint = joint_state(input, resource);

  const StateVector post = partial_inner(target, joint);
  SwapParadoxReport r;
  r.probability = post.squared_norm();
  if (r.probability <= kPruneTolerance) throw UndefinedReductionError("E0 outcome has zero probability");
  r.post_state = post.normalized();
  r.negativity_xr = negativity(r.post_state, Bipartition(TeleportModes::output(), {TeleportModes::x()}));
  r.initial_negativity_xr = marginal_negativity(joint, {TeleportModes::x()}, {TeleportModes::r()});
  r.input_separable = particle_separability_verdict(input);
  r.resource_separable = particle_separability_verdict(resource);
  r.target_separable = particle_separability_verdict(target);
  r.joint_separable = particle_separability_verdict(joint);
  r.notes.push_back("coherent input, resource and E0 target are normalized to unit norm");
  r.notes.push_back("post-state phase per (R,down) particle is e^{i(theta+phi)}, per (X,up) particle e^{-i omega}");
  return r;
}

}  // namespace modeforge
