#pragma once

#include <cstdint>

#include "bregprox/bregman.hpp"
#include "bregprox/function_core.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

/// Componentwise sign(z) * max(|z| - eta, 0) with z = y - eta * v: the exact
/// minimizer of ||x||_1 + <x, v> + (1/(2 eta)) ||x - y||^2.
Vector soft_threshold(const Vector& v, const Vector& y, double eta);

/// Euclidean projection of z onto {x >= 0, sum x = 1} (sort-and-threshold).
Vector project_onto_simplex(const Vector& z);

/// Projection of y - eta * v onto the simplex: the minimizer of
/// indicator(x) + <x, v> + (1/(2 eta)) ||x - y||^2.
Vector project_simplex(const Vector& v, const Vector& y, double eta);

/// Multiplicative-weights step x_i = y_i exp(-eta v_i) / sum_j y_j exp(-eta v_j),
/// the minimizer of indicator(x) + <x, v> + (1/eta) KL(x || y). Requires y
/// strictly positive. Coordinates that would underflow are floored at 2e-300
/// so the result stays in the interior.
Vector entropic_update(const Vector& v, const Vector& y, double eta);

/// Closed-form solver of argmin_x { g(x) + <x, v> + (1/eta) D_H(x, y) }.
///
/// Supported (g, H) pairs:
///   zero / squared Euclidean        -> gradient step
///   l1 / squared Euclidean          -> soft_threshold
///   simplex / squared Euclidean     -> project_simplex
///   simplex or zero / neg. entropy  -> entropic_update (dom H is the simplex)
/// Anything else fails fast in make_prox_map.
class ProxMap {
 public:
  ProxMap(NonsmoothTerm g, BregmanGenerator H);

  NonsmoothKind g_kind() const { return g_.kind(); }
  GeneratorKind h_kind() const { return H_.kind(); }
  const NonsmoothTerm& g() const { return g_; }
  const BregmanGenerator& H() const { return H_; }

  Vector solve(const Vector& v, const Vector& y, double eta) const;

  /// g(x) + <x, v> + (1/eta) D_H(x, y); +inf if x is outside dom g or dom H.
  double objective(const Vector& x, const Vector& v, const Vector& y, double eta) const;

  /// Random point of the feasible set for this pair, used by randomized
  /// optimality checks: a perturbation of `center` at scale t.
  Vector feasible_perturbation(const Vector& center, double t, CounterRng& rng) const;

 private:
  NonsmoothTerm g_;
  BregmanGenerator H_;
};

ProxMap make_prox_map(const NonsmoothTerm& g, const BregmanGenerator& H);

/// max over random feasible z of objective(x+) - objective(z), where
/// x+ = pm.solve(v, y, eta). Includes z = y. Needs trials >= 100.
double verify_prox_optimality(const ProxMap& pm, const Vector& v, const Vector& y, double eta,
                              std::size_t trials, std::uint64_t seed);

}  // namespace bregprox
