#pragma once

// Mode entanglement across an algebraic bipartition of the mode registry.

#include <Eigen/Dense>
#include <vector>

#include "modeforge/fock.hpp"

namespace modeforge {

/// Disjoint split of a registry into two non-empty mode sets (positions in
/// registry order).
class Bipartition {
 public:
  Bipartition(ModeRegistry registry, std::vector<ModeId> side_1);

  /// Spatial label `spatial` against everything else.
  static Bipartition by_spatial(const ModeRegistry& reg, const std::string& spatial);
  /// Up modes against down modes.
  static Bipartition by_internal(const ModeRegistry& reg);
  /// "LR" or "updown".
  static Bipartition named(const ModeRegistry& reg, const std::string& name);

  const ModeRegistry& registry() const { return registry_; }
  const std::vector<std::size_t>& side(int which) const { return which == 1 ? side_1_ : side_2_; }
  bool on_side(std::size_t mode, int which) const;

 private:
  ModeRegistry registry_;
  std::vector<std::size_t> side_1_;
  std::vector<std::size_t> side_2_;
};

/// Reduced state of a mode subset, in the Fock basis of that subset.
struct DensityMatrix {
  ModeRegistry registry;
  std::vector<FockOccupation> basis;
  Eigen::MatrixXcd matrix;

  double trace() const { return matrix.trace().real(); }
  double purity() const;
  /// Ascending eigenvalues of the Hermitian part.
  Eigen::VectorXd eigenvalues() const;
  /// Throws UsageError if not unit-trace Hermitian PSD within tolerance.
  void validate() const;
};

/// Outer product |s><s| / <s|s> over the occupations of s.
DensityMatrix projector(const StateVector& s);

/// Partial trace keeping side `keep` (1 or 2).
DensityMatrix reduce(const StateVector& state, const Bipartition& part, int keep);

/// von Neumann entropy in bits; eigenvalues below kPruneTolerance dropped.
double entropy(const DensityMatrix& rho);

/// Singular values of the amplitude matrix indexed by (side-1, side-2)
/// occupations, descending, zeros (< kPruneTolerance) removed.
Eigen::VectorXd schmidt_coefficients(const StateVector& state, const Bipartition& part);

int schmidt_rank(const StateVector& state, const Bipartition& part, double tol = kTolerance);

/// ((sum_i s_i)^2 - 1) / 2 from the Schmidt coefficients s_i of a pure state.
double negativity(const StateVector& state, const Bipartition& part);

/// Partial-transpose negativity of the (generally mixed) marginal on
/// modes_a + modes_b, transposing modes_b. Agrees with `negativity` when the
/// two sides cover the whole registry.
double marginal_negativity(const StateVector& state, const std::vector<ModeId>& modes_a,
                           const std::vector<ModeId>& modes_b);

/// Schmidt rank one across the bipartition.
bool is_mode_separable(const StateVector& state, const Bipartition& part);

/// |<A1 A2> - <A1><A2>| with A1 supported on side 1 and A2 on side 2.
double factorization_witness(const StateVector& state, const Bipartition& part,
                             const LadderPolynomial& a1, const LadderPolynomial& a2);

/// Single-particle operator X = sum X_ij |psi_i><psi_j| lifted to
/// sum X_ij a^dag_psi_i a_psi_j.
LadderPolynomial second_quantize(const ModeRegistry& reg, const std::vector<ModeId>& modes,
                                 const Eigen::MatrixXcd& x);

/// C = sum (X (x) Y)_{ik,jl} a^dag_psi_i a^dag_phi_k a_phi_l a_psi_j for X over
/// `modes_1` and Y over `modes_2` (disjoint).
LadderPolynomial symmetrized_observable(const ModeRegistry& reg, const std::vector<ModeId>& modes_1,
                                        const Eigen::MatrixXcd& x,
                                        const std::vector<ModeId>& modes_2,
                                        const Eigen::MatrixXcd& y);

/// Factorization test in the particle-label picture for a symmetric N-particle
/// state: |<X (x) Y (x) 1...> - <X (x) 1...><1 (x) Y (x) 1...>|, where the
/// first-quantized moments are recovered from X_sym / N and C / (N (N-1)).
double particle_label_witness(const StateVector& state, const std::vector<ModeId>& modes_1,
                              const Eigen::MatrixXcd& x, const std::vector<ModeId>& modes_2,
                              const Eigen::MatrixXcd& y);

/// Largest number-number correlation |<N_i N_j> - <N_i><N_j>| over modes i on
/// side 1 and j on side 2.
double number_witness(const StateVector& state, const Bipartition& part);

/// Single-particle reduced matrix gamma_ij = <a^dag_i a_j>.
Eigen::MatrixXcd one_body_density(const StateVector& state);

}  // namespace modeforge
