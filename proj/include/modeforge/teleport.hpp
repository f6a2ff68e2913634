#pragma once

// Mode teleportation: an M-particle state of (X,up),(Y,down) is moved onto
// (X,up),(R,down) with an N-particle resource on (L,up),(R,down), a Bell-like
// measurement on (Y,down),(L,up) and a phase correction local to (R,down).

#include <cstdint>
#include <random>
#include <vector>

#include "modeforge/fock.hpp"
#include "modeforge/states.hpp"

namespace modeforge {

enum class BellVariant {
  Restricted,  ///< ell in [0, N-M], C = M+1 (not complete)
  Complete,    ///< ell in [-M, N], C = C_ell
};

/// Mode registries used by the protocol.
struct TeleportModes {
  static ModeId x() { return {"X", Internal::Up}; }
  static ModeId y() { return {"Y", Internal::Down}; }
  static ModeId l() { return {"L", Internal::Up}; }
  static ModeId r() { return {"R", Internal::Down}; }
  /// (X,up) (Y,down)
  static ModeRegistry input();
  /// (L,up) (R,down)
  static ModeRegistry resource();
  /// (Y,down) (L,up)
  static ModeRegistry bell();
  /// (X,up) (R,down)
  static ModeRegistry output();
  /// (X,up) (Y,down) (L,up) (R,down)
  static ModeRegistry joint();
  static TwoModeSpec input_spec(int m) { return {input(), x(), y(), m}; }
  static TwoModeSpec resource_spec(int n) { return {resource(), l(), r(), n}; }
};

/// Number of k values in Bell block ell: #{k in [max(0,-ell), min(M, N-ell)]}.
int bell_block_size(int ell, int m, int n);

/// sum_k e^{2 pi i lambda k / C} / sqrt(C) |M-k>_Y |k+ell>_L over (Y,down),(L,up).
/// Throws DomainError for indices outside the variant's range.
StateVector bell_state(int ell, int lambda, int m, int n, BellVariant variant);

struct BellLabel {
  int ell;
  int lambda;
};

/// All labels of a variant, ordered by (ell, lambda).
std::vector<BellLabel> bell_labels(int m, int n, BellVariant variant);

struct ProtocolConfig {
  int m = 0;                ///< input particle number
  int n = 0;                ///< resource particle number
  StateVector resource;     ///< over TeleportModes::resource(), sector n
  BellVariant measurement = BellVariant::Complete;

  void validate() const;
};

struct BellOutcome {
  int ell = 0;
  int lambda = 0;
  double probability = 0.0;
  StateVector post_state;  ///< normalized, over TeleportModes::output()
};

/// Projects a joint state (over TeleportModes::joint(), sector M+N) onto every
/// Bell state of the configured variant. Zero-probability outcomes are omitted.
std::vector<BellOutcome> bell_measure(const StateVector& joint, const ProtocolConfig& config);

/// Phase unitary on (R,down) for outcome (ell, lambda): undoes the outcome
/// phase e^{-2 pi i lambda k / C} and the resource phase arg(alpha_{k+ell}),
/// where k = N - ell - n_R. Linear; works on unnormalized vectors too.
StateVector apply_correction(const StateVector& output_state, int ell, int lambda,
                             const ProtocolConfig& config);

StateVector correct(const BellOutcome& outcome, const ProtocolConfig& config);

/// Relabels n_R -> n_R - (N - M - ell) and places the result on the input
/// registry, so it can be compared with the input state. Components that
/// would get a negative occupation are dropped.
StateVector relabel_to_input(const StateVector& output_state, int ell, const ProtocolConfig& config);

/// Overlap |<input | relabeled corrected post-state>|.
double outcome_overlap(const StateVector& input, const BellOutcome& outcome,
                       const ProtocolConfig& config);

/// Closed-form average fidelity
///   f = 2/(M+2) [1 + sum_{k != j} max(0, M+1-|k-j|)/(2M+2) *
///       <vac|a_R^{N-k} a_L^k|Psi><Psi|(a_L^dag)^j (a_R^dag)^{N-j}|vac> / sqrt(k!(N-k)! j!(N-j)!)]
/// with the matrix elements evaluated by ladder operators on the resource.
double fidelity_closed_form(const StateVector& resource, int m);

struct SimulatedFidelity {
  double fidelity = 0.0;
  /// True when the restricted (incomplete) measurement was used.
  bool partial = false;
};

/// Exact Haar average over inputs of sum_outcomes p |<Phi|corrected>|^2.
/// The protocol is run on every input basis vector to obtain, per outcome, the
/// matrix T_{kj} = <e_k| corrected(e_j)>, then the fourth-moment identity
/// E[c_k c_j^* c_l c_m^*] = (d_kj d_lm + d_km d_lj)/((M+1)(M+2)) gives
/// E|<Phi|corrected(Phi)>|^2 = (|tr T|^2 + ||T||_F^2) / ((M+1)(M+2)).
SimulatedFidelity fidelity_simulated(const ProtocolConfig& config);

struct MonteCarloFidelity {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate over Haar-random inputs. Samples are split into fixed
/// chunks with independent seeded streams and summed in chunk order, so the
/// result does not depend on `threads`.
MonteCarloFidelity fidelity_monte_carlo(const ProtocolConfig& config, std::size_t samples,
                                        std::uint64_t seed, unsigned threads = 1);

/// Haar-random normalized input over TeleportModes::input() with M particles.
StateVector random_input(int m, std::mt19937_64& rng);

struct SwapOutcome {
  int ell;
  int lambda;
  double probability;
  double negativity;
};

struct SwapReport {
  std::vector<SwapOutcome> outcomes;
  double average_negativity = 0.0;
  /// Negativity across (X,up)|(R,down) of the joint input before measurement.
  double initial_negativity = 0.0;
};

/// Negativity across (X,up)|(R,down) of every uncorrected post-measurement
/// state, and its probability-weighted average.
SwapReport swap_entanglement(const StateVector& input, const ProtocolConfig& config);

/// input (x) resource over TeleportModes::joint().
StateVector joint_state(const StateVector& input, const StateVector& resource);

}  // namespace modeforge
