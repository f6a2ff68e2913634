#include "modeforge/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace modeforge {

// ---------------------------------------------------------------------------
// Bipartition

Bipartition::Bipartition(ModeRegistry registry, std::vector<ModeId> side_1)
    : registry_(std::move(registry)) {
  std::vector<bool> in_1(registry_.size(), false);
  for (const auto& m : side_1) {
    const auto i = registry_.find(m);
    if (!i) throw UsageError("bipartition mode " + m.label() + " not in registry");
    if (in_1[*i]) throw UsageError("bipartition lists mode " + m.label() + " twice");
    in_1[*i] = true;
  }
  for (std::size_t i = 0; i < registry_.size(); ++i) (in_1[i] ? side_1_ : side_2_).push_back(i);
  if (side_1_.empty() || side_2_.empty()) throw UsageError("bipartition sides must be non-empty");
}

Bipartition Bipartition::by_spatial(const ModeRegistry& reg, const std::string& spatial) {
  std::vector<ModeId> side;
  for (const auto& m : reg.modes())
    if (m.spatial == spatial) side.push_back(m);
  return Bipartition(reg, side);
}

Bipartition Bipartition::by_internal(const ModeRegistry& reg) {
  std::vector<ModeId> side;
  for (const auto& m : reg.modes())
    if (m.internal == Internal::Up) side.push_back(m);
  return Bipartition(reg, side);
}

Bipartition Bipartition::named(const ModeRegistry& reg, const std::string& name) {
  if (name == "LR") return by_spatial(reg, "L");
  if (name == "updown") return by_internal(reg);
  throw UsageError("unknown bipartition '" + name + "' (expected LR or updown)");
}

bool Bipartition::on_side(std::size_t mode, int which) const {
  const auto& s = side(which);
  return std::find(s.begin(), s.end(), mode) != s.end();
}

// ---------------------------------------------------------------------------
// DensityMatrix

double DensityMatrix::purity() const { return (matrix * matrix).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  const Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void DensityMatrix::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() != static_cast<Eigen::Index>(basis.size()))
    throw UsageError("density matrix shape does not match its basis");
  if (std::abs(trace() - 1.0) > kTolerance) throw UsageError("density matrix trace differs from 1");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kTolerance)
    throw UsageError("density matrix is not Hermitian");
  if (matrix.rows() > 0 && eigenvalues().minCoeff() < -kTolerance)
    throw UsageError("density matrix is not positive semidefinite");
}

DensityMatrix projector(const StateVector& s) {
  const double n2 = s.squared_norm();
  if (n2 < kPruneTolerance) throw UndefinedReductionError("projector onto the zero vector");
  DensityMatrix rho{s.registry(), {}, {}};
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.support_size()));
  Eigen::Index i = 0;
  for (const auto& [occ, a] : s.amplitudes()) {
    rho.basis.push_back(occ);
    v(i++) = a;
  }
  rho.matrix = v * v.adjoint() / n2;
  return rho;
}

namespace {

FockOccupation restrict_to(const FockOccupation& occ, const std::vector<std::size_t>& idx) {
  FockOccupation out(std::vector<int>(idx.size(), 0));
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = occ[idx[i]];
  return out;
}

// Amplitude matrix psi(side-1 occupation, side-2 occupation) with row and
// column labels in lexicographic order.
struct SplitAmplitudes {
  std::vector<FockOccupation> rows;
  std::vector<FockOccupation> cols;
  Eigen::MatrixXcd psi;
};

SplitAmplitudes split(const StateVector& state, const Bipartition& part) {
  if (!(state.registry() == part.registry())) throw UsageError("bipartition registry mismatch");
  std::map<FockOccupation, Eigen::Index> rows, cols;
  for (const auto& [occ, a] : state.amplitudes()) {
    rows.try_emplace(restrict_to(occ, part.side(1)), 0);
    cols.try_emplace(restrict_to(occ, part.side(2)), 0);
  }
  SplitAmplitudes out;
  Eigen::Index k = 0;
  for (auto& [o, i] : rows) {
    i = k++;
    out.rows.push_back(o);
  }
  k = 0;
  for (auto& [o, i] : cols) {
    i = k++;
    out.cols.push_back(o);
  }
  out.psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                   static_cast<Eigen::Index>(cols.size()));
  for (const auto& [occ, a] : state.amplitudes())
    out.psi(rows.at(restrict_to(occ, part.side(1))), cols.at(restrict_to(occ, part.side(2)))) = a;
  return out;
}

void check_support(const LadderPolynomial& op, const Bipartition& part, int side, const char* name) {
  for (auto m : op.support())
    if (!part.on_side(m, side))
      throw UsageError(std::string(name) + " acts on mode " + part.registry()[m].label() +
                       " outside side " + std::to_string(side));
}

// sum X_ij Y_kl a^dag_i a^dag_k a_l a_j, no disjointness requirement.
LadderPolynomial pair_operator(const ModeRegistry& reg, const std::vector<ModeId>& modes_1,
                               const Eigen::MatrixXcd& x, const std::vector<ModeId>& modes_2,
                               const Eigen::MatrixXcd& y) {
  LadderPolynomial c(reg);
  for (std::size_t i = 0; i < modes_1.size(); ++i)
    for (std::size_t j = 0; j < modes_1.size(); ++j) {
      const Complex xij = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(xij) < kPruneTolerance) continue;
      for (std::size_t k = 0; k < modes_2.size(); ++k)
        for (std::size_t l = 0; l < modes_2.size(); ++l) {
          const Complex ykl = y(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
          if (std::abs(ykl) < kPruneTolerance) continue;
          Monomial m{std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)};
          m.create[reg.index_of(modes_1[i])] += 1;
          m.create[reg.index_of(modes_2[k])] += 1;
          m.annihilate[reg.index_of(modes_2[l])] += 1;
          m.annihilate[reg.index_of(modes_1[j])] += 1;
          c += LadderPolynomial::monomial(reg, std::move(m), xij * ykl);
        }
    }
  return c;
}

void check_square(const Eigen::MatrixXcd& m, std::size_t n, const char* what) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != n)
    throw UsageError(std::string(what) + " must be square over its mode list");
}

}  // namespace

DensityMatrix reduce(const StateVector& state, const Bipartition& part, int keep) {
  if (keep != 1 && keep != 2) throw UsageError("keep must be 1 or 2");
  const double n2 = state.squared_norm();
  if (n2 < kPruneTolerance) throw UsageError("reduce of the zero vector");
  const SplitAmplitudes s = split(state, part);
  DensityMatrix rho;
  rho.registry = part.registry().subset(part.side(keep));
  if (keep == 1) {
    rho.basis = s.rows;
    rho.matrix = s.psi * s.psi.adjoint() / n2;
  } else {
    rho.basis = s.cols;
    rho.matrix = (s.psi.transpose() * s.psi.conjugate()) / n2;
  }
  return rho;
}

double entropy(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > kTolerance) throw UsageError("entropy: trace differs from 1");
  double s = 0.0;
  const Eigen::VectorXd ev = rho.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) >= kPruneTolerance) s -= ev(i) * std::log2(ev(i));
  return std::max(0.0, s);
}

Eigen::VectorXd schmidt_coefficients(const StateVector& state, const Bipartition& part) {
  const double nrm = state.norm();
  if (nrm < kPruneTolerance) throw UsageError("Schmidt decomposition of the zero vector");
  const SplitAmplitudes s = split(state, part);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(s.psi / nrm);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<double> kept;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= kPruneTolerance) kept.push_back(sv(i));
  std::sort(kept.begin(), kept.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

int schmidt_rank(const StateVector& state, const Bipartition& part, double tol) {
  const Eigen::VectorXd s = schmidt_coefficients(state, part);
  return static_cast<int>((s.array() > tol).count());
}

double negativity(const StateVector& state, const Bipartition& part) {
  const double sum = schmidt_coefficients(state, part).sum();
  return std::max(0.0, 0.5 * (sum * sum - 1.0));
}

bool is_mode_separable(const StateVector& state, const Bipartition& part) {
  return schmidt_rank(state, part) == 1;
}

double factorization_witness(const StateVector& state, const Bipartition& part,
                             const LadderPolynomial& a1, const LadderPolynomial& a2) {
  check_support(a1, part, 1, "A1");
  check_support(a2, part, 2, "A2");
  const StateVector psi = state.normalized();
  const Complex joint = expectation(a1 * a2, psi);
  return std::abs(joint - expectation(a1, psi) * expectation(a2, psi));
}

LadderPolynomial second_quantize(const ModeRegistry& reg, const std::vector<ModeId>& modes,
                                 const Eigen::MatrixXcd& x) {
  check_square(x, modes.size(), "single-particle operator");
  LadderPolynomial out(reg);
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const Complex xij = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(xij) < kPruneTolerance) continue;
      out += LadderPolynomial::creator(reg, modes[i]) * LadderPolynomial::annihilator(reg, modes[j]) *
             LadderPolynomial::identity(reg, xij);
    }
  return out;
}

LadderPolynomial symmetrized_observable(const ModeRegistry& reg, const std::vector<ModeId>& modes_1,
                                        const Eigen::MatrixXcd& x,
                                        const std::vector<ModeId>& modes_2,
                                        const Eigen::MatrixXcd& y) {
  check_square(x, modes_1.size(), "X");
  check_square(y, modes_2.size(), "Y");
  for (const auto& m : modes_1)
    if (std::find(modes_2.begin(), modes_2.end(), m) != modes_2.end())
      throw UsageError("symmetrized observable: mode " + m.label() + " on both sides");
  return pair_operator(reg, modes_1, x, modes_2, y);
}

double particle_label_witness(const StateVector& state, const std::vector<ModeId>& modes_1,
                              const Eigen::MatrixXcd& x, const std::vector<ModeId>& modes_2,
                              const Eigen::MatrixXcd& y) {
  check_square(x, modes_1.size(), "X");
  check_square(y, modes_2.size(), "Y");
  if (!state.sector() || *state.sector() < 2)
    throw UsageError("particle-label witness needs a fixed sector with at least two particles");
  const double n = *state.sector();
  const StateVector psi = state.normalized();
  const ModeRegistry& reg = psi.registry();
  const Complex x1 = expectation(second_quantize(reg, modes_1, x), psi) / n;
  const Complex y1 = expectation(second_quantize(reg, modes_2, y), psi) / n;
  const Complex xy = expectation(pair_operator(reg, modes_1, x, modes_2, y), psi) / (n * (n - 1.0));
  return std::abs(xy - x1 * y1);
}

double number_witness(const StateVector& state, const Bipartition& part) {
  const ModeRegistry& reg = part.registry();
  double best = 0.0;
  for (auto i : part.side(1))
    for (auto j : part.side(2))
      best = std::max(best, factorization_witness(state, part, LadderPolynomial::number(reg, reg[i]),
                                                  LadderPolynomial::number(reg, reg[j])));
  return best;
}

Eigen::MatrixXcd one_body_density(const StateVector& state) {
  const ModeRegistry& reg = state.registry();
  const auto n = static_cast<Eigen::Index>(reg.size());
  const double n2 = state.squared_norm();
  if (n2 < kPruneTolerance) throw UsageError("one-body density of the zero vector");
  // gamma_ij = <a_i psi | a_j psi>
  std::vector<StateVector> lowered;
  for (const auto& m : reg.modes())
    lowered.push_back(apply_ladder(LadderPolynomial::annihilator(reg, m), state));
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = inner(lowered[static_cast<std::size_t>(i)], lowered[static_cast<std::size_t>(j)]) / n2;
  return g;
}

}  // namespace modeforge

namespace modeforge {

double marginal_negativity(const StateVector& state, const std::vector<ModeId>& modes_a,
                           const std::vector<ModeId>& modes_b) {
  if (modes_a.empty() || modes_b.empty()) throw UsageError("marginal_negativity needs two non-empty sides");
  std::vector<ModeId> both = modes_a;
  both.insert(both.end(), modes_b.begin(), modes_b.end());
  const DensityMatrix rho = both.size() == state.registry().size()
                                ? projector(state)
                                : reduce(state, Bipartition(state.registry(), both), 1);
  std::vector<std::size_t> ia, ib;
  for (const auto& m : modes_a) ia.push_back(rho.registry.index_of(m));
  for (const auto& m : modes_b) ib.push_back(rho.registry.index_of(m));

  std::map<FockOccupation, Eigen::Index> as, bs;
  for (const auto& occ : rho.basis) {
    as.try_emplace(restrict_to(occ, ia), 0);
    bs.try_emplace(restrict_to(occ, ib), 0);
  }
  Eigen::Index k = 0;
  for (auto& [o, i] : as) i = k++;
  k = 0;
  for (auto& [o, i] : bs) i = k++;
  const auto nb = static_cast<Eigen::Index>(bs.size());
  const auto dim = static_cast<Eigen::Index>(as.size()) * nb;

  // <a b|rho|a' b'> -> <a b'|rho^T_B|a' b>
  Eigen::MatrixXcd pt = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t r = 0; r < rho.basis.size(); ++r) {
    const Eigen::Index ar = as.at(restrict_to(rho.basis[r], ia));
    const Eigen::Index br = bs.at(restrict_to(rho.basis[r], ib));
    for (std::size_t c = 0; c < rho.basis.size(); ++c) {
      const Eigen::Index ac = as.at(restrict_to(rho.basis[c], ia));
      const Eigen::Index bc = bs.at(restrict_to(rho.basis[c], ib));
      pt(ar * nb + bc, ac * nb + br) = rho.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) neg -= es.eigenvalues()(i);
  return neg < kTolerance ? 0.0 : neg;
}

}  // namespace modeforge
