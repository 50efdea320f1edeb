#include "bregprox/prox_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <fmt/format.h>

#include "bregprox/errors.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

namespace {

void require_step(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ContractViolation(fmt::format("prox step must be positive and finite, got {}", eta));
}

void require_same_size(const Vector& v, const Vector& y) {
  if (v.size() != y.size()) throw ContractViolation("prox inputs have different dimensions");
}

}  // namespace

Vector soft_threshold(const Vector& v, const Vector& y, double eta) {
  require_step(eta);
  require_same_size(v, y);
  Vector x(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    const double z = y[i] - eta * v[i];
    const double mag = std::abs(z) - eta;
    x[i] = mag > 0.0 ? std::copysign(mag, z) : 0.0;
  }
  return x;
}

Vector project_onto_simplex(const Vector& z) {
  const Index n = z.size();
  if (n == 0) throw ContractViolation("project_onto_simplex: empty vector");
  std::vector<double> sorted(z.data(), z.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  Vector x = (z.array() - tau).cwiseMax(0.0);
  // One renormalization pass absorbs the rounding in tau.
  const double s = x.sum();
  if (s > 0.0) x /= s;
  return x;
}

Vector project_simplex(const Vector& v, const Vector& y, double eta) {
  require_step(eta);
  require_same_size(v, y);
  return project_onto_simplex(y - eta * v);
}

Vector entropic_update(const Vector& v, const Vector& y, double eta) {
  require_step(eta);
  require_same_size(v, y);
  if (y.size() == 0) throw ContractViolation("entropic_update: empty vector");
  if (!((y.array() > 0.0).all()) || !y.allFinite())
    throw DomainError("entropic_update: y must be strictly positive");

  const Vector logits = y.array().log() - eta * v.array();
  const double shift = logits.maxCoeff();
  Vector x = (logits.array() - shift).exp();
  x /= x.sum();
  // Twice the interior floor, so the renormalization cannot push a clamped
  // coordinate back below it.
  constexpr double floor = 2.0 * DomainDescriptor::kInteriorFloor;
  if ((x.array() < floor).any()) {
    x = x.cwiseMax(floor);
    x /= x.sum();
  }
  return x;
}

ProxMap::ProxMap(NonsmoothTerm g, BregmanGenerator H) : g_(g), H_(std::move(H)) {
  if (g_.dimension() != H_.dimension())
    throw ContractViolation("ProxMap: g and H dimensions differ");
}

ProxMap make_prox_map(const NonsmoothTerm& g, const BregmanGenerator& H) {
  const bool quad = H.kind() == GeneratorKind::squared_euclidean;
  const bool entropy = H.kind() == GeneratorKind::negative_entropy;
  const bool supported = quad || (entropy && (g.kind() == NonsmoothKind::simplex_indicator ||
                                              g.kind() == NonsmoothKind::zero));
  if (!supported)
    throw ContractViolation(fmt::format("no closed-form prox for g = {}, H = {}",
                                        to_string(g.kind()), to_string(H.kind())));
  return ProxMap(g, H);
}

Vector ProxMap::solve(const Vector& v, const Vector& y, double eta) const {
  if (v.size() != g_.dimension() || y.size() != g_.dimension())
    throw ContractViolation("ProxMap::solve: dimension mismatch");
  if (H_.kind() == GeneratorKind::negative_entropy) return entropic_update(v, y, eta);
  switch (g_.kind()) {
    case NonsmoothKind::zero:
      require_step(eta);
      return y - eta * v;
    case NonsmoothKind::l1:
      return soft_threshold(v, y, eta);
    case NonsmoothKind::simplex_indicator:
      return project_simplex(v, y, eta);
  }
  throw ContractViolation("ProxMap::solve: unsupported pair");
}

double ProxMap::objective(const Vector& x, const Vector& v, const Vector& y, double eta) const {
  const double gx = g_.value(x);
  if (gx == kInfinity || !H_.domain().member(x)) return kInfinity;
  return gx + x.dot(v) + bregman_distance(H_, x, y) / eta;
}

Vector ProxMap::feasible_perturbation(const Vector& center, double t, CounterRng& rng) const {
  const Index n = center.size();
  const bool simplex = g_.kind() == NonsmoothKind::simplex_indicator ||
                       H_.domain().kind() == DomainKind::simplex;
  if (simplex) {
    // Convex combination with a random simplex point stays feasible.
    const double w = std::min(t, 1.0);
    return (1.0 - w) * center + w * rng.simplex_point(n);
  }
  return center + t * rng.normal_vector(n);
}

double verify_prox_optimality(const ProxMap& pm, const Vector& v, const Vector& y, double eta,
                              std::size_t trials, std::uint64_t seed) {
  if (trials < 100) throw ContractViolation("verify_prox_optimality: need >= 100 trials");
  CounterRng rng(seed);
  const Vector x = pm.solve(v, y, eta);
  const double best = pm.objective(x, v, y, eta);
  double worst = best - pm.objective(y, v, y, eta);
  for (std::size_t i = 0; i < trials; ++i) {
    // Scales sweep 1 .. 1e-6 so both local and far-away competitors appear.
    const double t = std::pow(10.0, -static_cast<double>(i % 7));
    const Vector z = pm.feasible_perturbation(x, t, rng);
    const double obj = pm.objective(z, v, y, eta);
    if (std::isfinite(obj)) worst = std::max(worst, best - obj);
  }
  return worst;
}

}  // namespace bregprox
