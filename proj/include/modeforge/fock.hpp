#pragma once

// Sparse bosonic Fock-space arithmetic: modes, occupation-number basis
// vectors, state vectors and normal-ordered ladder polynomials.

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modeforge/errors.hpp"

namespace modeforge {

using Complex = std::complex<double>;

/// Amplitudes and coefficients with magnitude below this are dropped.
inline constexpr double kPruneTolerance = 1e-12;
/// Global comparison tolerance.
inline constexpr double kTolerance = 1e-9;

enum class Internal { Up, Down };

std::string to_string(Internal s);
Internal parse_internal(const std::string& s);

/// A single-particle mode: spatial label times internal (spin-like) label.
struct ModeId {
  std::string spatial;
  Internal internal = Internal::Up;

  auto operator<=>(const ModeId&) const = default;
  bool operator==(const ModeId&) const = default;

  /// e.g. "L,up"
  std::string label() const;
};

/// Ordered set of distinct modes. The order is fixed at construction and
/// defines the layout of every FockOccupation over this registry.
class ModeRegistry {
 public:
  ModeRegistry() = default;
  explicit ModeRegistry(std::vector<ModeId> modes);

  /// (L,up) (L,down) (R,up) (R,down)
  static ModeRegistry standard();
  /// (X,up) (Y,down) (L,up) (R,down): input modes followed by resource modes.
  static ModeRegistry teleportation();

  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  const ModeId& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<ModeId>& modes() const { return modes_; }

  std::optional<std::size_t> find(const ModeId& m) const;
  /// Throws UsageError when the mode is absent.
  std::size_t index_of(const ModeId& m) const;
  bool contains(const ModeId& m) const { return find(m).has_value(); }

  /// Registry made of the given positions, in the given order.
  ModeRegistry subset(std::span<const std::size_t> indices) const;

  bool operator==(const ModeRegistry&) const = default;

 private:
  std::vector<ModeId> modes_;
};

/// Occupation numbers, one per mode in registry order.
struct FockOccupation {
  std::vector<int> counts;

  FockOccupation() = default;
  explicit FockOccupation(std::vector<int> c) : counts(std::move(c)) {}
  FockOccupation(std::initializer_list<int> c) : counts(c) {}

  std::size_t size() const { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }
  int& operator[](std::size_t i) { return counts[i]; }
  int total() const;

  auto operator<=>(const FockOccupation&) const = default;
  bool operator==(const FockOccupation&) const = default;
};

/// Sparse superposition of Fock basis vectors over a registry.
///
/// Amplitudes smaller than kPruneTolerance are never stored. When a sector is
/// recorded, every stored occupation carries exactly that particle number.
class StateVector {
 public:
  using AmplitudeMap = std::map<FockOccupation, Complex>;

  StateVector() = default;
  /// Zero vector over `registry`, optionally tagged with a particle sector.
  explicit StateVector(ModeRegistry registry, std::optional<int> sector = std::nullopt);
  /// Builds a state from explicit amplitudes. The sector is inferred when all
  /// occupations share one particle number; an explicit sector is validated.
  StateVector(ModeRegistry registry, AmplitudeMap amps,
              std::optional<int> sector = std::nullopt);

  const ModeRegistry& registry() const { return registry_; }
  const AmplitudeMap& amplitudes() const { return amps_; }
  std::optional<int> sector() const { return sector_; }

  Complex amplitude(const FockOccupation& occ) const;
  std::size_t support_size() const { return amps_.size(); }
  bool is_zero() const { return amps_.empty(); }

  double squared_norm() const;
  double norm() const;
  bool is_normalized(double tol = kTolerance) const;
  /// Throws UndefinedReductionError on the zero vector.
  StateVector normalized() const;

 private:
  ModeRegistry registry_;
  AmplitudeMap amps_;
  std::optional<int> sector_;
};

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(Complex c, const StateVector& s);

/// Normal-ordered monomial: prod_m (a_m^dag)^create[m] prod_m a_m^annihilate[m].
struct Monomial {
  std::vector<int> create;
  std::vector<int> annihilate;

  int particle_shift() const;
  int degree() const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

/// Finite linear combination of normal-ordered monomials over one registry.
/// Products are normal-ordered on the fly with the bosonic commutation rule,
/// so two polynomials are equal as operators iff their term maps agree.
class LadderPolynomial {
 public:
  using TermMap = std::map<Monomial, Complex>;

  LadderPolynomial() = default;
  /// The zero polynomial.
  explicit LadderPolynomial(ModeRegistry registry);

  static LadderPolynomial identity(const ModeRegistry& reg, Complex c = 1.0);
  static LadderPolynomial creator(const ModeRegistry& reg, const ModeId& m, int power = 1);
  static LadderPolynomial annihilator(const ModeRegistry& reg, const ModeId& m, int power = 1);
  /// a_m^dag a_m
  static LadderPolynomial number(const ModeRegistry& reg, const ModeId& m);
  /// c * monomial, with per-mode creation/annihilation powers.
  static LadderPolynomial monomial(const ModeRegistry& reg, Monomial mono, Complex c = 1.0);

  const ModeRegistry& registry() const { return registry_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  LadderPolynomial adjoint() const;
  bool is_hermitian(double tol = kTolerance) const;
  /// Modes touched by at least one term.
  std::vector<std::size_t> support() const;
  /// Common particle-number shift of all terms, if there is one.
  std::optional<int> particle_shift() const;
  /// Largest coefficient magnitude; 0 for the zero polynomial.
  double max_abs_coefficient() const;

  LadderPolynomial& operator+=(const LadderPolynomial& o);
  LadderPolynomial& operator-=(const LadderPolynomial& o);
  LadderPolynomial& operator*=(Complex c);

 private:
  void add_term(const Monomial& m, Complex c);

  ModeRegistry registry_;
  TermMap terms_;

  friend LadderPolynomial operator*(const LadderPolynomial&, const LadderPolynomial&);
};

LadderPolynomial operator+(LadderPolynomial a, const LadderPolynomial& b);
LadderPolynomial operator-(LadderPolynomial a, const LadderPolynomial& b);
LadderPolynomial operator*(Complex c, LadderPolynomial p);
/// Operator product, normal-ordered.
LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b);
LadderPolynomial commutator(const LadderPolynomial& a, const LadderPolynomial& b);
LadderPolynomial power(const LadderPolynomial& p, int n);

/// True when both polynomials agree coefficient-wise within `tol`.
bool approx_equal(const LadderPolynomial& a, const LadderPolynomial& b, double tol = kTolerance);

// ---------------------------------------------------------------------------
// Core operations

/// |vac> over a non-empty registry.
StateVector vacuum(const ModeRegistry& registry);

/// Single basis vector with amplitude 1.
StateVector basis_state(const ModeRegistry& registry, FockOccupation occ);

StateVector apply_ladder(const LadderPolynomial& poly, const StateVector& state);

Complex inner(const StateVector& bra, const StateVector& ket);

Complex expectation(const LadderPolynomial& op, const StateVector& state);

/// <op^2> - <op>^2 for Hermitian op, clamped at zero.
double variance(const LadderPolynomial& op, const StateVector& state);

/// Multiplies each basis vector by phase(occupation). `phase` must return
/// unit-modulus values for the result to be unitary.
template <class PhaseFn>
StateVector apply_diagonal(const StateVector& s, PhaseFn&& phase) {
  StateVector::AmplitudeMap out;
  for (const auto& [occ, amp] : s.amplitudes()) out.emplace(occ, amp * phase(occ));
  return StateVector(s.registry(), std::move(out), s.sector());
}

// ---------------------------------------------------------------------------
// Composite systems

/// Registry of `a` followed by registry of `b`; modes must be disjoint.
ModeRegistry concatenate(const ModeRegistry& a, const ModeRegistry& b);

/// |a> (x) |b> over concatenate(a.registry(), b.registry()).
StateVector tensor_product(const StateVector& a, const StateVector& b);

/// Re-expresses a state over a registry holding the same modes in another
/// order, or over a larger registry (extra modes empty).
StateVector embed(const StateVector& s, const ModeRegistry& target);

/// Partial inner product <bra|_S |ket>, where S = bra.registry() must be a
/// subset of ket.registry(). The result lives on the remaining modes, in
/// ket-registry order.
StateVector partial_inner(const StateVector& bra, const StateVector& ket);

/// Registry of ket modes not present in `removed`, in ket order.
ModeRegistry complement(const ModeRegistry& full, const ModeRegistry& removed);

// ---------------------------------------------------------------------------
// Combinatorics

/// n! by incremental floating-point multiplication.
double factorial(int n);
/// Exact n! for 0 <= n <= 20.
std::uint64_t factorial_exact(int n);
/// Binomial coefficient as a double.
double binomial(int n, int k);
/// sqrt((n+k)! / n!): factor picked up by k creations on occupation n.
double raising_factor(int n, int k);
/// sqrt(n! / (n-k)!): factor picked up by k annihilations on occupation n (0 if k > n).
double lowering_factor(int n, int k);

/// All occupations over `modes` mode slots with total `n`, lexicographic order.
std::vector<FockOccupation> enumerate_sector(std::size_t modes, int n);

}  // namespace modeforge
