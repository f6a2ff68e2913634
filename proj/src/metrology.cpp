#include "modeforge/metrology.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace modeforge {

namespace {
constexpr std::size_t kMaxDenseDimension = 4096;
}

Generator Generator::nlr(const ModeRegistry& reg, const ModeId& a, const ModeId& b) {
  if (a == b) throw UsageError("NLR generator needs two distinct modes");
  return {GeneratorKind::NLR, LadderPolynomial::number(reg, a) - LadderPolynomial::number(reg, b), a, b};
}

Generator Generator::tlr(const ModeRegistry& reg, const ModeId& a, const ModeId& b) {
  if (a == b) throw UsageError("TLR generator needs two distinct modes");
  const auto ad = LadderPolynomial::creator(reg, a);
  const auto bd = LadderPolynomial::creator(reg, b);
  const auto am = LadderPolynomial::annihilator(reg, a);
  const auto bm = LadderPolynomial::annihilator(reg, b);
  return {GeneratorKind::TLR, ad * bm + bd * am, a, b};
}

Generator Generator::custom(LadderPolynomial poly) {
  if (!poly.is_hermitian()) throw UsageError("generator must be Hermitian");
  return {GeneratorKind::Custom, std::move(poly), {}, {}};
}

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::NLR: return "nlr";
    case GeneratorKind::TLR: return "tlr";
    case GeneratorKind::Custom: return "custom";
  }
  return "custom";
}

double qfi(const StateVector& state, const Generator& gen) {
  if (!state.is_normalized()) throw UsageError("qfi requires a normalized state");
  const LadderPolynomial half = 0.5 * gen.poly;
  return 4.0 * variance(half, state);
}

double closed_form_qfi(const QfiFamily& family) {
  struct Visitor {
    double operator()(const TwoFockQfi& p) const {
      const double d = p.ell1 - p.ell2;
      return 4.0 * p.xi * (1.0 - p.xi) * d * d;
    }
    double operator()(const UniformQfi& p) const {
      return (static_cast<double>(p.n) * p.n + 2.0 * p.n) / 3.0;
    }
    double operator()(const CoherentQfi& p) const { return 4.0 * p.xi * (1.0 - p.xi) * p.n; }
    double operator()(const FockTlrQfi& p) const {
      return p.n + 2.0 * p.ell * (p.n - p.ell);
    }
  };
  return std::visit(Visitor{}, family);
}

QfiFamily make_qfi_family(const std::string& name, int n, double xi, int ell1, int ell2) {
  if (name == "two_fock") return TwoFockQfi{ell1, ell2, xi};
  if (name == "uniform") return UniformQfi{n};
  if (name == "coherent") return CoherentQfi{n, xi};
  if (name == "fock_tlr") return FockTlrQfi{n, ell1};
  throw UsageError("unknown closed-form family '" + name + "'");
}

namespace {

// Occupations reachable from the state's support under repeated action of
// the generator's monomials.
std::vector<FockOccupation> closure_basis(const StateVector& state, const LadderPolynomial& g) {
  std::set<FockOccupation> seen;
  std::deque<FockOccupation> queue;
  for (const auto& [occ, a] : state.amplitudes())
    if (seen.insert(occ).second) queue.push_back(occ);
  while (!queue.empty()) {
    const FockOccupation cur = queue.front();
    queue.pop_front();
    const StateVector img = apply_ladder(g, basis_state(state.registry(), cur));
    for (const auto& [occ, a] : img.amplitudes()) {
      if (seen.insert(occ).second) {
        if (seen.size() > kMaxDenseDimension)
          throw UsageError("evolution subspace exceeds the dense size limit");
        queue.push_back(occ);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

StateVector dense_evolve(const StateVector& state, const LadderPolynomial& g, double theta) {
  const std::vector<FockOccupation> basis = closure_basis(state, g);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::map<FockOccupation, Eigen::Index> index;
  for (Eigen::Index i = 0; i < dim; ++i) index.emplace(basis[static_cast<std::size_t>(i)], i);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const StateVector col = apply_ladder(g, basis_state(state.registry(), basis[static_cast<std::size_t>(j)]));
    for (const auto& [occ, a] : col.amplitudes()) h(index.at(occ), j) = a;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases =
      (Complex(0.0, theta) * es.eigenvalues().cast<Complex>()).array().exp();
  const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (const auto& [occ, a] : state.amplitudes()) v(index.at(occ)) = a;
  const Eigen::VectorXcd w = u * v;

  StateVector::AmplitudeMap out;
  for (Eigen::Index i = 0; i < dim; ++i) out.emplace(basis[static_cast<std::size_t>(i)], w(i));
  return StateVector(state.registry(), std::move(out), state.sector());
}

}  // namespace

StateVector evolve(const StateVector& state, const Generator& gen, double theta) {
  if (!(gen.poly.registry() == state.registry())) throw UsageError("evolve: registry mismatch");
  switch (gen.kind) {
    case GeneratorKind::NLR: {
      const auto ia = state.registry().index_of(gen.mode_a);
      const auto ib = state.registry().index_of(gen.mode_b);
      return apply_diagonal(state, [&](const FockOccupation& occ) {
        return std::polar(1.0, theta * (occ[ia] - occ[ib]));
      });
    }
    case GeneratorKind::TLR: {
      if (!state.sector()) throw UsageError("TLR evolution needs a fixed particle number");
      const auto ia = state.registry().index_of(gen.mode_a);
      const auto ib = state.registry().index_of(gen.mode_b);
      for (const auto& [occ, a] : state.amplitudes())
        if (occ[ia] + occ[ib] != occ.total())
          throw UsageError("TLR evolution needs a state confined to the two generator modes");
      return dense_evolve(state, gen.poly, theta);
    }
    case GeneratorKind::Custom:
      return dense_evolve(state, gen.poly, theta);
  }
  throw UsageError("unknown generator kind");
}

std::string to_string(NoiseVerdict v) {
  switch (v) {
    case NoiseVerdict::SubShotNoise: return "sub_shot_noise";
    case NoiseVerdict::ShotNoise: return "shot_noise";
    case NoiseVerdict::SuperShotNoise: return "super_shot_noise";
    case NoiseVerdict::Heisenberg: return "heisenberg";
  }
  return "?";
}

NoiseVerdict shot_noise_verdict(double fisher, int n) {
  const double nn = static_cast<double>(n) * n;
  if (std::abs(fisher - nn) <= kTolerance) return NoiseVerdict::Heisenberg;
  if (std::abs(fisher - n) <= kTolerance) return NoiseVerdict::ShotNoise;
  if (fisher < n) return NoiseVerdict::SubShotNoise;
  return NoiseVerdict::SuperShotNoise;
}

}  // namespace modeforge
