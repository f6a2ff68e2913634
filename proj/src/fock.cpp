#include "modeforge/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace modeforge {

std::string to_string(Internal s) { return s == Internal::Up ? "up" : "down"; }

Internal parse_internal(const std::string& s) {
  if (s == "up" || s == "u" || s == "↑") return Internal::Up;
  if (s == "down" || s == "d" || s == "dn" || s == "↓") return Internal::Down;
  throw ConfigurationError("unknown internal label '" + s + "'");
}

std::string ModeId::label() const { return spatial + "," + to_string(internal); }

// ---------------------------------------------------------------------------
// ModeRegistry

ModeRegistry::ModeRegistry(std::vector<ModeId> modes) : modes_(std::move(modes)) {
  std::set<ModeId> seen;
  for (const auto& m : modes_) {
    if (m.spatial.empty()) throw ConfigurationError("mode with empty spatial label");
    if (!seen.insert(m).second) throw ConfigurationError("duplicate mode " + m.label());
  }
}

ModeRegistry ModeRegistry::standard() {
  return ModeRegistry({{"L", Internal::Up}, {"L", Internal::Down},
                       {"R", Internal::Up}, {"R", Internal::Down}});
}

ModeRegistry ModeRegistry::teleportation() {
  return ModeRegistry({{"X", Internal::Up}, {"Y", Internal::Down},
                       {"L", Internal::Up}, {"R", Internal::Down}});
}

std::optional<std::size_t> ModeRegistry::find(const ModeId& m) const {
  auto it = std::find(modes_.begin(), modes_.end(), m);
  if (it == modes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::size_t ModeRegistry::index_of(const ModeId& m) const {
  if (auto i = find(m)) return *i;
  throw UsageError("mode " + m.label() + " not in registry");
}

ModeRegistry ModeRegistry::subset(std::span<const std::size_t> indices) const {
  std::vector<ModeId> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    if (i >= modes_.size()) throw UsageError("mode index out of range");
    out.push_back(modes_[i]);
  }
  return ModeRegistry(std::move(out));
}

int FockOccupation::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

// ---------------------------------------------------------------------------
// Combinatorics

double factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative number");
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::uint64_t factorial_exact(int n) {
  if (n < 0 || n > 20) throw DomainError("exact factorial only for 0 <= n <= 20");
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r < 9.0e15 ? std::round(r) : r;
}

double raising_factor(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= std::sqrt(static_cast<double>(n + i));
  return r;
}

double lowering_factor(int n, int k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= std::sqrt(static_cast<double>(n - i));
  return r;
}

namespace {

void enumerate_rec(std::size_t slot, int remaining, FockOccupation& cur,
                   std::vector<FockOccupation>& out) {
  if (slot + 1 == cur.size()) {
    cur[slot] = remaining;
    out.push_back(cur);
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    cur[slot] = c;
    enumerate_rec(slot + 1, remaining - c, cur, out);
  }
}

void require_same_registry(const ModeRegistry& a, const ModeRegistry& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": registry mismatch");
}

}  // namespace

std::vector<FockOccupation> enumerate_sector(std::size_t modes, int n) {
  std::vector<FockOccupation> out;
  if (modes == 0 || n < 0) return out;
  FockOccupation cur(std::vector<int>(modes, 0));
  enumerate_rec(0, n, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(ModeRegistry registry, std::optional<int> sector)
    : registry_(std::move(registry)), sector_(sector) {}

StateVector::StateVector(ModeRegistry registry, AmplitudeMap amps, std::optional<int> sector)
    : registry_(std::move(registry)) {
  std::optional<int> common;
  bool uniform = true;
  for (auto it = amps.begin(); it != amps.end();) {
    const auto& occ = it->first;
    if (occ.size() != registry_.size())
      throw UsageError("occupation length does not match registry size");
    if (std::any_of(occ.counts.begin(), occ.counts.end(), [](int c) { return c < 0; }))
      throw UsageError("negative occupation number");
    if (std::abs(it->second) < kPruneTolerance) {
      it = amps.erase(it);
      continue;
    }
    const int n = occ.total();
    if (!common) common = n;
    else if (*common != n) uniform = false;
    ++it;
  }
  amps_ = std::move(amps);
  if (sector) {
    if (amps_.empty() || (uniform && common == sector)) {
      sector_ = sector;
    } else {
      throw UsageError("amplitudes outside the declared particle sector");
    }
  } else if (uniform && common) {
    sector_ = common;
  }
}

Complex StateVector::amplitude(const FockOccupation& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{} : it->second;
}

double StateVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [occ, a] : amps_) s += std::norm(a);
  return s;
}

double StateVector::norm() const { return std::sqrt(squared_norm()); }

bool StateVector::is_normalized(double tol) const { return std::abs(squared_norm() - 1.0) <= tol; }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n < kPruneTolerance) throw UndefinedReductionError("cannot normalize the zero vector");
  return Complex(1.0 / n) * *this;
}

namespace {

StateVector combine(const StateVector& a, const StateVector& b, double sign) {
  require_same_registry(a.registry(), b.registry(), "state addition");
  auto amps = a.amplitudes();
  for (const auto& [occ, amp] : b.amplitudes()) amps[occ] += sign * amp;
  std::optional<int> sector;
  if (a.sector() && a.sector() == b.sector()) sector = a.sector();
  return StateVector(a.registry(), std::move(amps), sector);
}

}  // namespace

StateVector operator+(const StateVector& a, const StateVector& b) { return combine(a, b, 1.0); }
StateVector operator-(const StateVector& a, const StateVector& b) { return combine(a, b, -1.0); }

StateVector operator*(Complex c, const StateVector& s) {
  StateVector::AmplitudeMap amps;
  for (const auto& [occ, a] : s.amplitudes()) amps.emplace(occ, c * a);
  return StateVector(s.registry(), std::move(amps), s.sector());
}

// ---------------------------------------------------------------------------
// Monomial / LadderPolynomial

int Monomial::particle_shift() const {
  return std::accumulate(create.begin(), create.end(), 0) -
         std::accumulate(annihilate.begin(), annihilate.end(), 0);
}

int Monomial::degree() const {
  return std::accumulate(create.begin(), create.end(), 0) +
         std::accumulate(annihilate.begin(), annihilate.end(), 0);
}

LadderPolynomial::LadderPolynomial(ModeRegistry registry) : registry_(std::move(registry)) {}

void LadderPolynomial::add_term(const Monomial& m, Complex c) {
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneTolerance) terms_.erase(it);
}

LadderPolynomial LadderPolynomial::monomial(const ModeRegistry& reg, Monomial mono, Complex c) {
  if (mono.create.size() != reg.size() || mono.annihilate.size() != reg.size())
    throw UsageError("monomial length does not match registry size");
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (mono.create[i] < 0 || mono.annihilate[i] < 0) throw UsageError("negative ladder power");
  LadderPolynomial p(reg);
  p.add_term(mono, c);
  return p;
}

LadderPolynomial LadderPolynomial::identity(const ModeRegistry& reg, Complex c) {
  return monomial(reg, {std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)}, c);
}

LadderPolynomial LadderPolynomial::creator(const ModeRegistry& reg, const ModeId& m, int power) {
  Monomial mono{std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)};
  mono.create[reg.index_of(m)] = power;
  return monomial(reg, std::move(mono));
}

LadderPolynomial LadderPolynomial::annihilator(const ModeRegistry& reg, const ModeId& m, int power) {
  Monomial mono{std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)};
  mono.annihilate[reg.index_of(m)] = power;
  return monomial(reg, std::move(mono));
}

LadderPolynomial LadderPolynomial::number(const ModeRegistry& reg, const ModeId& m) {
  Monomial mono{std::vector<int>(reg.size(), 0), std::vector<int>(reg.size(), 0)};
  const auto i = reg.index_of(m);
  mono.create[i] = 1;
  mono.annihilate[i] = 1;
  return monomial(reg, std::move(mono));
}

LadderPolynomial LadderPolynomial::adjoint() const {
  LadderPolynomial out(registry_);
  for (const auto& [m, c] : terms_) out.add_term({m.annihilate, m.create}, std::conj(c));
  return out;
}

bool LadderPolynomial::is_hermitian(double tol) const { return approx_equal(*this, adjoint(), tol); }

std::vector<std::size_t> LadderPolynomial::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < registry_.size(); ++i) {
    const bool used = std::any_of(terms_.begin(), terms_.end(), [i](const auto& t) {
      return t.first.create[i] != 0 || t.first.annihilate[i] != 0;
    });
    if (used) out.push_back(i);
  }
  return out;
}

std::optional<int> LadderPolynomial::particle_shift() const {
  std::optional<int> shift;
  for (const auto& [m, c] : terms_) {
    const int s = m.particle_shift();
    if (!shift) shift = s;
    else if (*shift != s) return std::nullopt;
  }
  return shift.value_or(0);
}

double LadderPolynomial::max_abs_coefficient() const {
  double r = 0.0;
  for (const auto& [m, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

LadderPolynomial& LadderPolynomial::operator+=(const LadderPolynomial& o) {
  require_same_registry(registry_, o.registry_, "polynomial addition");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LadderPolynomial& LadderPolynomial::operator-=(const LadderPolynomial& o) {
  require_same_registry(registry_, o.registry_, "polynomial subtraction");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

LadderPolynomial& LadderPolynomial::operator*=(Complex c) {
  TermMap scaled;
  for (const auto& [m, v] : terms_)
    if (std::abs(c * v) >= kPruneTolerance) scaled.emplace(m, c * v);
  terms_ = std::move(scaled);
  return *this;
}

LadderPolynomial operator+(LadderPolynomial a, const LadderPolynomial& b) { return a += b; }
LadderPolynomial operator-(LadderPolynomial a, const LadderPolynomial& b) { return a -= b; }
LadderPolynomial operator*(Complex c, LadderPolynomial p) { return p *= c; }

namespace {

// Normal-orders A1^dag B1 A2^dag B2 using, mode by mode,
//   a^b (a^dag)^c = sum_k C(b,k) C(c,k) k! (a^dag)^(c-k) a^(b-k).
void multiply_monomials(const Monomial& x, const Monomial& y, Complex coeff, std::size_t mode,
                        Monomial& acc, LadderPolynomial::TermMap& out) {
  const std::size_t n = x.create.size();
  if (mode == n) {
    auto [it, inserted] = out.try_emplace(acc, coeff);
    if (!inserted) it->second += coeff;
    return;
  }
  const int b = x.annihilate[mode];
  const int c = y.create[mode];
  for (int k = 0; k <= std::min(b, c); ++k) {
    const double w = binomial(b, k) * binomial(c, k) * factorial(k);
    acc.create[mode] = x.create[mode] + c - k;
    acc.annihilate[mode] = b - k + y.annihilate[mode];
    multiply_monomials(x, y, coeff * w, mode + 1, acc, out);
  }
}

}  // namespace

LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b) {
  require_same_registry(a.registry(), b.registry(), "polynomial product");
  const std::size_t n = a.registry().size();
  LadderPolynomial::TermMap raw;
  Monomial acc{std::vector<int>(n, 0), std::vector<int>(n, 0)};
  for (const auto& [mx, cx] : a.terms())
    for (const auto& [my, cy] : b.terms()) multiply_monomials(mx, my, cx * cy, 0, acc, raw);
  LadderPolynomial out(a.registry());
  for (const auto& [m, c] : raw) out.add_term(m, c);
  return out;
}

LadderPolynomial commutator(const LadderPolynomial& a, const LadderPolynomial& b) {
  return a * b - b * a;
}

LadderPolynomial power(const LadderPolynomial& p, int n) {
  if (n < 0) throw DomainError("negative operator power");
  LadderPolynomial r = LadderPolynomial::identity(p.registry());
  for (int i = 0; i < n; ++i) r = r * p;
  return r;
}

bool approx_equal(const LadderPolynomial& a, const LadderPolynomial& b, double tol) {
  if (!(a.registry() == b.registry())) return false;
  return (a - b).max_abs_coefficient() <= tol;
}

// ---------------------------------------------------------------------------
// Operations

StateVector vacuum(const ModeRegistry& registry) {
  if (registry.empty()) throw ConfigurationError("vacuum over an empty registry");
  return basis_state(registry, FockOccupation(std::vector<int>(registry.size(), 0)));
}

StateVector basis_state(const ModeRegistry& registry, FockOccupation occ) {
  if (occ.size() != registry.size()) throw UsageError("occupation length does not match registry");
  StateVector::AmplitudeMap amps;
  amps.emplace(std::move(occ), Complex(1.0));
  return StateVector(registry, std::move(amps));
}

StateVector apply_ladder(const LadderPolynomial& poly, const StateVector& state) {
  require_same_registry(poly.registry(), state.registry(), "apply_ladder");
  const std::size_t n = state.registry().size();
  StateVector::AmplitudeMap out;
  FockOccupation work(std::vector<int>(n, 0));
  for (const auto& [mono, coeff] : poly.terms()) {
    for (const auto& [occ, amp] : state.amplitudes()) {
      double factor = 1.0;
      bool alive = true;
      for (std::size_t i = 0; i < n && alive; ++i) {
        const int k = mono.annihilate[i];
        if (k > occ[i]) {
          alive = false;
          break;
        }
        const int after = occ[i] - k;
        factor *= lowering_factor(occ[i], k) * raising_factor(after, mono.create[i]);
        work[i] = after + mono.create[i];
      }
      if (!alive) continue;
      out[work] += coeff * factor * amp;
    }
  }
  std::optional<int> sector;
  if (state.sector()) {
    if (auto shift = poly.particle_shift(); shift && *state.sector() + *shift >= 0)
      sector = *state.sector() + *shift;
  }
  // Sector is only asserted when the result is compatible with it; pruning
  // may leave an empty map, which is compatible with any sector.
  return StateVector(state.registry(), std::move(out), sector);
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  require_same_registry(bra.registry(), ket.registry(), "inner");
  const auto& small = bra.support_size() <= ket.support_size() ? bra.amplitudes() : ket.amplitudes();
  const auto& large = bra.support_size() <= ket.support_size() ? ket.amplitudes() : bra.amplitudes();
  const bool bra_small = bra.support_size() <= ket.support_size();
  Complex s{};
  for (const auto& [occ, a] : small) {
    auto it = large.find(occ);
    if (it == large.end()) continue;
    s += bra_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return s;
}

Complex expectation(const LadderPolynomial& op, const StateVector& state) {
  return inner(state, apply_ladder(op, state));
}

double variance(const LadderPolynomial& op, const StateVector& state) {
  if (!op.is_hermitian()) throw UsageError("variance requires a Hermitian operator");
  const double nrm = state.squared_norm();
  if (nrm < kPruneTolerance) throw UsageError("variance of the zero vector");
  const StateVector v = apply_ladder(op, state);
  const double second = v.squared_norm() / nrm;
  const double first = inner(state, v).real() / nrm;
  return std::max(0.0, second - first * first);
}

// ---------------------------------------------------------------------------
// Composite systems

ModeRegistry concatenate(const ModeRegistry& a, const ModeRegistry& b) {
  std::vector<ModeId> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  return ModeRegistry(std::move(modes));
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  ModeRegistry reg = concatenate(a.registry(), b.registry());
  StateVector::AmplitudeMap amps;
  for (const auto& [oa, xa] : a.amplitudes()) {
    for (const auto& [ob, xb] : b.amplitudes()) {
      std::vector<int> c = oa.counts;
      c.insert(c.end(), ob.counts.begin(), ob.counts.end());
      amps.emplace(FockOccupation(std::move(c)), xa * xb);
    }
  }
  std::optional<int> sector;
  if (a.sector() && b.sector()) sector = *a.sector() + *b.sector();
  return StateVector(std::move(reg), std::move(amps), sector);
}

StateVector embed(const StateVector& s, const ModeRegistry& target) {
  std::vector<std::size_t> where(s.registry().size());
  for (std::size_t i = 0; i < where.size(); ++i) {
    auto j = target.find(s.registry()[i]);
    if (!j) throw UsageError("embed: mode " + s.registry()[i].label() + " missing from target");
    where[i] = *j;
  }
  StateVector::AmplitudeMap amps;
  for (const auto& [occ, a] : s.amplitudes()) {
    FockOccupation t(std::vector<int>(target.size(), 0));
    for (std::size_t i = 0; i < where.size(); ++i) t[where[i]] = occ[i];
    amps.emplace(std::move(t), a);
  }
  return StateVector(target, std::move(amps), s.sector());
}

ModeRegistry complement(const ModeRegistry& full, const ModeRegistry& removed) {
  std::vector<ModeId> rest;
  for (const auto& m : full.modes())
    if (!removed.contains(m)) rest.push_back(m);
  return ModeRegistry(std::move(rest));
}

StateVector partial_inner(const StateVector& bra, const StateVector& ket) {
  const ModeRegistry& full = ket.registry();
  std::vector<std::size_t> sub_idx;
  for (const auto& m : bra.registry().modes()) sub_idx.push_back(full.index_of(m));
  ModeRegistry rest_reg = complement(full, bra.registry());
  std::vector<std::size_t> rest_idx;
  for (const auto& m : rest_reg.modes()) rest_idx.push_back(full.index_of(m));

  StateVector::AmplitudeMap out;
  FockOccupation sub(std::vector<int>(sub_idx.size(), 0));
  for (const auto& [occ, a] : ket.amplitudes()) {
    for (std::size_t i = 0; i < sub_idx.size(); ++i) sub[i] = occ[sub_idx[i]];
    const Complex b = bra.amplitude(sub);
    if (b == Complex{}) continue;
    FockOccupation rest(std::vector<int>(rest_idx.size(), 0));
    for (std::size_t i = 0; i < rest_idx.size(); ++i) rest[i] = occ[rest_idx[i]];
    out[rest] += std::conj(b) * a;
  }
  std::optional<int> sector;
  if (ket.sector() && bra.sector() && *ket.sector() >= *bra.sector())
    sector = *ket.sector() - *bra.sector();
  return StateVector(std::move(rest_reg), std::move(out), sector);
}

}  // namespace modeforge
