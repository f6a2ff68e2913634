#include "modeforge/states.hpp"

#include <cmath>

namespace modeforge {

void TwoModeSpec::validate() const {
  if (mode_a == mode_b) throw UsageError("two-mode spec needs distinct modes");
  registry.index_of(mode_a);
  registry.index_of(mode_b);
  if (total_n < 0) throw DomainError("negative particle number");
}

FockOccupation TwoModeSpec::occupation(int ell) const {
  FockOccupation occ(std::vector<int>(registry.size(), 0));
  occ[index_a()] = ell;
  occ[index_b()] = total_n - ell;
  return occ;
}

TwoModeSpec standard_pair(int total_n) {
  return {ModeRegistry::standard(), {"L", Internal::Up}, {"R", Internal::Down}, total_n};
}

namespace {

void check_ell(const TwoModeSpec& spec, int ell) {
  if (ell < 0 || ell > spec.total_n)
    throw DomainError("occupation index " + std::to_string(ell) + " outside [0, " +
                      std::to_string(spec.total_n) + "]");
}

void check_weight(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("weight xi must lie in [0, 1]");
}

StateVector from_alpha(const TwoModeSpec& spec, std::span<const Complex> alpha) {
  StateVector::AmplitudeMap amps;
  for (int ell = 0; ell <= spec.total_n; ++ell) amps.emplace(spec.occupation(ell), alpha[ell]);
  return StateVector(spec.registry, std::move(amps), spec.total_n);
}

}  // namespace

StateVector fock_state(const TwoModeSpec& spec, int ell) {
  spec.validate();
  check_ell(spec, ell);
  return StateVector(spec.registry, {{spec.occupation(ell), Complex(1.0)}}, spec.total_n);
}

StateVector two_fock_superposition(const TwoModeSpec& spec, int ell1, int ell2, double xi,
                                   double phi) {
  spec.validate();
  check_ell(spec, ell1);
  check_ell(spec, ell2);
  check_weight(xi);
  if (ell1 == ell2) throw DomainError("two-Fock superposition needs ell1 != ell2");
  std::vector<Complex> alpha(spec.total_n + 1, Complex{});
  alpha[ell1] = std::sqrt(xi);
  alpha[ell2] = std::polar(std::sqrt(1.0 - xi), phi);
  return from_alpha(spec, alpha);
}

StateVector uniform_state(const TwoModeSpec& spec, std::span<const double> phases) {
  spec.validate();
  if (phases.size() != static_cast<std::size_t>(spec.total_n + 1))
    throw DomainError("uniform state needs N+1 phases");
  const double w = 1.0 / std::sqrt(static_cast<double>(spec.total_n + 1));
  std::vector<Complex> alpha(spec.total_n + 1);
  for (int ell = 0; ell <= spec.total_n; ++ell) alpha[ell] = std::polar(w, phases[ell]);
  return from_alpha(spec, alpha);
}

StateVector uniform_state(const TwoModeSpec& spec) {
  std::vector<double> zeros(spec.total_n + 1, 0.0);
  return uniform_state(spec, zeros);
}

StateVector uniform_state_linear(const TwoModeSpec& spec, double slope) {
  std::vector<double> phases(spec.total_n + 1);
  for (int ell = 0; ell <= spec.total_n; ++ell) phases[ell] = slope * ell;
  return uniform_state(spec, phases);
}

StateVector su2_coherent(const TwoModeSpec& spec, double xi, double phi) {
  spec.validate();
  check_weight(xi);
  const int n = spec.total_n;
  std::vector<Complex> alpha(n + 1);
  for (int ell = 0; ell <= n; ++ell) {
    const double mag = std::sqrt(binomial(n, ell)) * std::pow(xi, 0.5 * ell) *
                       std::pow(1.0 - xi, 0.5 * (n - ell));
    alpha[ell] = std::polar(mag, phi * (n - ell));
  }
  return from_alpha(spec, alpha).normalized();
}

StateVector generic_two_mode(const TwoModeSpec& spec, std::span<const Complex> alpha,
                             bool renormalize) {
  spec.validate();
  if (alpha.size() != static_cast<std::size_t>(spec.total_n + 1))
    throw DomainError("generic two-mode state needs N+1 amplitudes");
  double norm2 = 0.0;
  for (auto a : alpha) norm2 += std::norm(a);
  if (norm2 < kPruneTolerance) throw DomainError("all-zero amplitude vector is not normalizable");
  if (!renormalize && std::abs(norm2 - 1.0) > kTolerance)
    throw DomainError("amplitudes are not normalized");
  StateVector s = from_alpha(spec, alpha);
  return renormalize ? s.normalized() : s;
}

std::vector<Complex> two_mode_amplitudes(const StateVector& s, const TwoModeSpec& spec) {
  spec.validate();
  if (!(s.registry() == spec.registry)) throw UsageError("state registry differs from spec");
  std::vector<Complex> alpha(spec.total_n + 1);
  double captured = 0.0;
  for (int ell = 0; ell <= spec.total_n; ++ell) {
    alpha[ell] = s.amplitude(spec.occupation(ell));
    captured += std::norm(alpha[ell]);
  }
  if (std::abs(captured - s.squared_norm()) > kTolerance)
    throw UsageError("state has weight outside the two-mode sector");
  return alpha;
}

}  // namespace modeforge
