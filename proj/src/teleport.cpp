#include "modeforge/teleport.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "modeforge/entanglement.hpp"

namespace modeforge {

ModeRegistry TeleportModes::input() { return ModeRegistry({x(), y()}); }
ModeRegistry TeleportModes::resource() { return ModeRegistry({l(), r()}); }
ModeRegistry TeleportModes::bell() { return ModeRegistry({y(), l()}); }
ModeRegistry TeleportModes::output() { return ModeRegistry({x(), r()}); }
ModeRegistry TeleportModes::joint() { return ModeRegistry({x(), y(), l(), r()}); }

int bell_block_size(int ell, int m, int n) {
  const int lo = std::max(0, -ell);
  const int hi = std::min(m, n - ell);
  return std::max(0, hi - lo + 1);
}

namespace {

void check_bell_indices(int ell, int lambda, int m, int n, BellVariant variant) {
  if (m < 0 || n < 0) throw DomainError("particle numbers must be non-negative");
  if (variant == BellVariant::Restricted) {
    if (m > n) throw DomainError("restricted Bell family is empty for M > N");
    if (ell < 0 || ell > n - m) throw DomainError("restricted Bell index ell outside [0, N-M]");
    if (lambda < 0 || lambda > m) throw DomainError("restricted Bell index lambda outside [0, M]");
    return;
  }
  if (ell < -m || ell > n) throw DomainError("complete Bell index ell outside [-M, N]");
  const int c = bell_block_size(ell, m, n);
  if (c == 0 || lambda < 0 || lambda >= c) throw DomainError("complete Bell index lambda outside [0, C_ell)");
}

double two_pi() { return 2.0 * std::numbers::pi; }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sample_fidelity(const StateVector& input, const ProtocolConfig& config) {
  double f = 0.0;
  for (const auto& o : bell_measure(joint_state(input, config.resource), config)) {
    const double ov = outcome_overlap(input, o, config);
    f += o.probability * ov * ov;
  }
  return f;
}

}  // namespace

StateVector bell_state(int ell, int lambda, int m, int n, BellVariant variant) {
  check_bell_indices(ell, lambda, m, n, variant);
  const int c = bell_block_size(ell, m, n);
  const int lo = std::max(0, -ell);
  const int hi = std::min(m, n - ell);
  const double w = 1.0 / std::sqrt(static_cast<double>(c));
  StateVector::AmplitudeMap amps;
  for (int k = lo; k <= hi; ++k)
    amps.emplace(FockOccupation{m - k, k + ell}, std::polar(w, two_pi() * lambda * k / c));
  return StateVector(TeleportModes::bell(), std::move(amps), m + ell);
}

std::vector<BellLabel> bell_labels(int m, int n, BellVariant variant) {
  std::vector<BellLabel> out;
  if (variant == BellVariant::Restricted) {
    for (int ell = 0; ell <= n - m; ++ell)
      for (int lambda = 0; lambda <= m; ++lambda) out.push_back({ell, lambda});
    return out;
  }
  for (int ell = -m; ell <= n; ++ell)
    for (int lambda = 0; lambda < bell_block_size(ell, m, n); ++lambda) out.push_back({ell, lambda});
  return out;
}

void ProtocolConfig::validate() const {
  if (m < 0 || n < 0) throw DomainError("particle numbers must be non-negative");
  if (measurement == BellVariant::Restricted && m > n)
    throw UsageError("restricted measurement needs M <= N");
  if (!(resource.registry() == TeleportModes::resource()))
    throw UsageError("resource must live on (L,up),(R,down)");
  if (resource.sector() != n) throw UsageError("resource is not in the N-particle sector");
  if (!resource.is_normalized()) throw UsageError("resource is not normalized");
}

StateVector joint_state(const StateVector& input, const StateVector& resource) {
  if (!(input.registry() == TeleportModes::input())) throw UsageError("input must live on (X,up),(Y,down)");
  if (!(resource.registry() == TeleportModes::resource()))
    throw UsageError("resource must live on (L,up),(R,down)");
  return tensor_product(input, resource);
}

std::vector<BellOutcome> bell_measure(const StateVector& joint, const ProtocolConfig& config) {
  config.validate();
  if (!(joint.registry() == TeleportModes::joint())) throw UsageError("joint state registry mismatch");
  if (joint.sector() != config.m + config.n) throw UsageError("joint state is not in the M+N sector");
  std::vector<BellOutcome> out;
  for (const auto& [ell, lambda] : bell_labels(config.m, config.n, config.measurement)) {
    const StateVector post =
        partial_inner(bell_state(ell, lambda, config.m, config.n, config.measurement), joint);
    const double p = post.squared_norm();
    if (p < kPruneTolerance) continue;
    out.push_back({ell, lambda, p, post.normalized()});
  }
  return out;
}

StateVector apply_correction(const StateVector& output_state, int ell, int lambda,
                             const ProtocolConfig& config) {
  if (!(output_state.registry() == TeleportModes::output()))
    throw UsageError("correction acts on (X,up),(R,down) states");
  const int c = config.measurement == BellVariant::Restricted ? config.m + 1
                                                              : bell_block_size(ell, config.m, config.n);
  const std::vector<Complex> alpha =
      two_mode_amplitudes(config.resource, TeleportModes::resource_spec(config.n));
  return apply_diagonal(output_state, [&](const FockOccupation& occ) {
    const int j = config.n - occ[1];  // resource index k + ell
    const int k = j - ell;
    Complex phase = std::polar(1.0, two_pi() * lambda * k / c);
    if (j >= 0 && j <= config.n && std::abs(alpha[j]) > kPruneTolerance)
      phase *= std::conj(alpha[j]) / std::abs(alpha[j]);
    return phase;
  });
}

StateVector correct(const BellOutcome& outcome, const ProtocolConfig& config) {
  return apply_correction(outcome.post_state, outcome.ell, outcome.lambda, config);
}

StateVector relabel_to_input(const StateVector& output_state, int ell, const ProtocolConfig& config) {
  const int offset = config.n - config.m - ell;
  StateVector::AmplitudeMap amps;
  for (const auto& [occ, a] : output_state.amplitudes()) {
    const int y = occ[1] - offset;
    if (y < 0) continue;
    amps.emplace(FockOccupation{occ[0], y}, a);
  }
  return StateVector(TeleportModes::input(), std::move(amps));
}

double outcome_overlap(const StateVector& input, const BellOutcome& outcome,
                       const ProtocolConfig& config) {
  return std::abs(inner(input, relabel_to_input(correct(outcome, config), outcome.ell, config)));
}

double fidelity_closed_form(const StateVector& resource, int m) {
  if (m < 0) throw DomainError("M must be non-negative");
  if (!(resource.registry() == TeleportModes::resource()) || !resource.sector())
    throw UsageError("resource must be a fixed-N state on (L,up),(R,down)");
  const int n = *resource.sector();
  const ModeRegistry& reg = resource.registry();
  const StateVector vac = vacuum(reg);
  // g[k] = <vac| a_R^{N-k} a_L^k |Psi> / sqrt(k! (N-k)!)
  std::vector<Complex> g(n + 1);
  for (int k = 0; k <= n; ++k) {
    const LadderPolynomial lower = LadderPolynomial::annihilator(reg, TeleportModes::r(), n - k) *
                                   LadderPolynomial::annihilator(reg, TeleportModes::l(), k);
    g[k] = inner(vac, apply_ladder(lower, resource)) / std::sqrt(factorial(k) * factorial(n - k));
  }
  double cross = 0.0;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j) {
      if (k == j) continue;
      const double w = std::max(0, m + 1 - std::abs(k - j)) / (2.0 * m + 2.0);
      cross += w * (g[k] * std::conj(g[j])).real();
    }
  return 2.0 / (m + 2.0) * (1.0 + cross);
}

SimulatedFidelity fidelity_simulated(const ProtocolConfig& config) {
  config.validate();
  const int m = config.m;
  const auto dim = static_cast<Eigen::Index>(m + 1);
  const TwoModeSpec in_spec = TeleportModes::input_spec(m);

  std::vector<StateVector> joints;
  for (int j = 0; j <= m; ++j) joints.push_back(joint_state(fock_state(in_spec, j), config.resource));

  double total = 0.0;
  for (const auto& [ell, lambda] : bell_labels(m, config.n, config.measurement)) {
    const StateVector bell = bell_state(ell, lambda, m, config.n, config.measurement);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j <= m; ++j) {
      const StateVector post = partial_inner(bell, joints[static_cast<std::size_t>(j)]);
      if (post.is_zero()) continue;
      const StateVector out = relabel_to_input(apply_correction(post, ell, lambda, config), ell, config);
      for (int k = 0; k <= m; ++k) t(k, j) = out.amplitude(in_spec.occupation(k));
    }
    total += std::norm(t.trace()) + t.squaredNorm();
  }
  return {total / ((m + 1.0) * (m + 2.0)), config.measurement == BellVariant::Restricted};
}

StateVector random_input(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> c(static_cast<std::size_t>(m + 1));
  for (auto& x : c) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    x = {re, im};
  }
  return generic_two_mode(TeleportModes::input_spec(m), c, true);
}

MonteCarloFidelity fidelity_monte_carlo(const ProtocolConfig& config, std::size_t samples,
                                        std::uint64_t seed, unsigned threads) {
  config.validate();
  if (samples < 2) throw UsageError("Monte-Carlo needs at least two samples");
  constexpr std::size_t kChunks = 64;
  std::vector<double> sums(kChunks, 0.0), squares(kChunks, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t chunk = next++; chunk < kChunks; chunk = next++) {
      std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (chunk + 1));
      std::mt19937_64 rng(splitmix64(s));
      const std::size_t begin = samples * chunk / kChunks;
      const std::size_t end = samples * (chunk + 1) / kChunks;
      for (std::size_t i = begin; i < end; ++i) {
        const double f = sample_fidelity(random_input(config.m, rng), config);
        sums[chunk] += f;
        squares[chunk] += f * f;
      }
    }
  };
  threads = std::max(1u, threads);
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  double sum = 0.0, sq = 0.0;
  for (std::size_t c = 0; c < kChunks; ++c) {
    sum += sums[c];
    sq += squares[c];
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

SwapReport swap_entanglement(const StateVector& input, const ProtocolConfig& config) {
  const StateVector joint = joint_state(input, config.resource);
  const Bipartition xr(TeleportModes::output(), {TeleportModes::x()});
  SwapReport report;
  double weight = 0.0;
  for (const auto& o : bell_measure(joint, config)) {
    const double neg = negativity(o.post_state, xr);
    report.outcomes.push_back({o.ell, o.lambda, o.probability, neg});
    report.average_negativity += o.probability * neg;
    weight += o.probability;
  }
  if (weight > 0.0) report.average_negativity /= weight;
  report.initial_negativity = marginal_negativity(joint, {TeleportModes::x()}, {TeleportModes::r()});
  return report;
}

}  // namespace modeforge
