#pragma once

// Interferometric phase estimation: generators, exact unitary evolution and
// quantum Fisher information of pure states.

#include <string>
#include <variant>

#include "modeforge/fock.hpp"
#include "modeforge/states.hpp"

namespace modeforge {

enum class GeneratorKind { NLR, TLR, Custom };

/// Hermitian generator G of the phase family exp(i theta G).
///   NLR = a^dag a - b^dag b      (local phase shift)
///   TLR = a^dag b + b^dag a      (beam-splitter rotation)
struct Generator {
  GeneratorKind kind = GeneratorKind::Custom;
  LadderPolynomial poly;
  /// Modes (a, b) for NLR/TLR.
  ModeId mode_a;
  ModeId mode_b;

  static Generator nlr(const ModeRegistry& reg, const ModeId& a, const ModeId& b);
  static Generator tlr(const ModeRegistry& reg, const ModeId& a, const ModeId& b);
  /// Throws UsageError for a non-Hermitian polynomial.
  static Generator custom(LadderPolynomial poly);

  static Generator nlr(const TwoModeSpec& spec) { return nlr(spec.registry, spec.mode_a, spec.mode_b); }
  static Generator tlr(const TwoModeSpec& spec) { return tlr(spec.registry, spec.mode_a, spec.mode_b); }
};

std::string to_string(GeneratorKind k);

/// Quantum Fisher information of a pure state in the angular-momentum
/// normalization: the generator enters through J = G/2, so
/// F = 4 Var(J) = Var(G). With this normalization N is the shot-noise level
/// and N^2 the Heisenberg level for N particles.
double qfi(const StateVector& state, const Generator& gen);

struct TwoFockQfi { int ell1; int ell2; double xi; };
struct UniformQfi { int n; };
struct CoherentQfi { int n; double xi; };
struct FockTlrQfi { int n; int ell; };
using QfiFamily = std::variant<TwoFockQfi, UniformQfi, CoherentQfi, FockTlrQfi>;

/// 4 xi (1-xi) (ell1-ell2)^2 | (N^2 + 2N)/3 | 4 xi (1-xi) N | N + 2 ell (N - ell)
double closed_form_qfi(const QfiFamily& family);

/// Parses "two_fock", "uniform", "coherent", "fock_tlr" and fills parameters;
/// throws UsageError on an unknown family name.
QfiFamily make_qfi_family(const std::string& name, int n, double xi, int ell1, int ell2);

/// exp(i theta G)|state>. NLR is applied as exact per-basis phases; TLR and
/// custom generators are exponentiated densely on the smallest subspace closed
/// under G that contains the state, via Hermitian eigendecomposition.
StateVector evolve(const StateVector& state, const Generator& gen, double theta);

enum class NoiseVerdict { SubShotNoise, ShotNoise, SuperShotNoise, Heisenberg };

std::string to_string(NoiseVerdict v);

/// Compares F against N (shot noise) and N^2 (Heisenberg), tolerance kTolerance.
NoiseVerdict shot_noise_verdict(double fisher, int n);

}  // namespace modeforge
