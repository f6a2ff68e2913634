#pragma once

// Named two-mode state families. Every constructor returns a unit-norm state
// in the fixed sector total_n, expanded over the pair's registry.

#include <span>
#include <string>
#include <vector>

#include "modeforge/fock.hpp"

namespace modeforge {

/// Two distinct modes of a registry sharing `total_n` particles.
/// Index ell below always counts the particles in mode_a.
struct TwoModeSpec {
  ModeRegistry registry;
  ModeId mode_a;
  ModeId mode_b;
  int total_n = 0;

  /// Throws UsageError/DomainError when the invariants fail.
  void validate() const;
  std::size_t index_a() const { return registry.index_of(mode_a); }
  std::size_t index_b() const { return registry.index_of(mode_b); }
  /// Occupation with ell particles in mode_a and total_n - ell in mode_b.
  FockOccupation occupation(int ell) const;
};

/// (L,up)/(R,down) over the standard four-mode registry.
TwoModeSpec standard_pair(int total_n);

/// |ell>_a |N-ell>_b
StateVector fock_state(const TwoModeSpec& spec, int ell);

/// sqrt(xi) |ell1> + e^{i phi} sqrt(1-xi) |ell2>. NOON when {ell1, ell2} = {0, N}, xi = 1/2.
StateVector two_fock_superposition(const TwoModeSpec& spec, int ell1, int ell2, double xi,
                                   double phi);

/// Equal superposition (N+1)^{-1/2} sum_ell e^{i phases[ell]} |ell>.
StateVector uniform_state(const TwoModeSpec& spec, std::span<const double> phases);
/// All phases zero.
StateVector uniform_state(const TwoModeSpec& spec);
/// phases[ell] = slope * ell.
StateVector uniform_state_linear(const TwoModeSpec& spec, double slope);

/// (sqrt(xi) a^dag + e^{i phi} sqrt(1-xi) b^dag)^N / sqrt(N!) |vac>, expanded
/// into binomial amplitudes and renormalized.
StateVector su2_coherent(const TwoModeSpec& spec, double xi, double phi);

/// sum_ell alpha[ell] |ell>. With `renormalize`, any non-zero alpha is scaled
/// to unit norm; otherwise alpha must already be normalized within kTolerance.
StateVector generic_two_mode(const TwoModeSpec& spec, std::span<const Complex> alpha,
                             bool renormalize = false);

/// Reads alpha[ell] = amplitude on |ell>_a|N-ell>_b back out of a state.
/// Throws UsageError if the state has weight elsewhere.
std::vector<Complex> two_mode_amplitudes(const StateVector& s, const TwoModeSpec& spec);

}  // namespace modeforge
