#pragma once

// Particle-entanglement constructions that do not rely on particle labels:
// the rho^(n) reduction over a single-particle subspace, local n-particle
// operators, and the entanglement-swapping paradox of condensate-type
// particle entanglement.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "modeforge/entanglement.hpp"
#include "modeforge/fock.hpp"

namespace modeforge {

/// Single-particle subspace K spanned by `modes`. With `basis`, the columns
/// of the unitary give the orthonormal basis psi_j = sum_m basis(m, j) |mode_m>
/// used for the removal operators; otherwise the modes themselves are used.
struct SubspaceSpec {
  std::vector<ModeId> modes{{"L", Internal::Up}, {"L", Internal::Down}};
  std::optional<Eigen::MatrixXcd> basis;

  /// Throws UsageError when empty, when a mode is missing from `reg`, or when
  /// `basis` is not a unitary of matching size.
  void validate(const ModeRegistry& reg) const;
};

/// rho^(n) = sum_{n_1+...+n_p=n} A|psi><psi|A^dag / tr(...), A = prod_j a_{psi_j}^{n_j}.
/// Throws DomainError unless 1 <= n <= particle number, and
/// UndefinedReductionError when no support survives the removal.
DensityMatrix nolabel_rho_n(const StateVector& state, const SubspaceSpec& k, int n);

/// sum <s_1..s_n|O|t_1..t_n> a^dag_{x,s_1}..a^dag_{x,s_n} a_{x,t_n}..a_{x,t_1}
/// on spatial site x. O is 2^n x 2^n over internal labels (bit j of the row
/// index is s_{j+1}; 0 = up). Both internal modes of x must be registered.
LadderPolynomial nolabel_local_operator(const Eigen::MatrixXcd& o, const std::string& spatial, int n,
                                        const ModeRegistry& reg);

/// True when every term acts only on modes of one spatial label.
bool is_site_local(const LadderPolynomial& op, const std::string& spatial);

/// Rank-one single-particle reduced matrix: all particles share one mode.
bool particle_separability_verdict(const StateVector& state);

/// |eta, omega> over (Y,down),(L,up): the coherent state with weight eta on
/// (Y,down), normalized.
StateVector swap_target(double eta, double omega, int n);

/// E0 |state> for a state on (X,up),(Y,down),(L,up),(R,down): the projector
/// |eta,omega><eta,omega| on (Y,down),(L,up), identity elsewhere.
StateVector apply_e0(const StateVector& joint, double eta, double omega, int n);

struct SwapParadoxReport {
  double probability = 0.0;
  /// Normalized, over (X,up),(R,down).
  StateVector post_state;
  double negativity_xr = 0.0;
  double initial_negativity_xr = 0.0;
  bool input_separable = false;
  bool resource_separable = false;
  bool target_separable = false;
  bool joint_separable = false;
  std::vector<std::string> notes;
};

/// Input coherent state (zeta, theta) on (X,up),(Y,down), resource (xi, phi) on
/// (L,up),(R,down), both with n particles, post-selected on E0(eta, omega).
/// Throws DomainError for parameters outside [0,1] or n < 1 and
/// UndefinedReductionError when the outcome has zero probability.
SwapParadoxReport swap_paradox(double zeta, double xi, double eta, double theta, double phi,
                               double omega, int n);

/// Fock amplitudes of the post-selected state on |k>_X |n-k>_R, unnormalized:
/// C(n,k)^{3/2} (zeta xi (1-eta))^{k/2} ((1-zeta)(1-xi) eta)^{(n-k)/2}
/// e^{i(theta+phi)(n-k)} e^{-i omega k}.
std::vector<Complex> swap_paradox_profile(double zeta, double xi, double eta, double theta,
                                          double phi, double omega, int n);

}  // namespace modeforge
