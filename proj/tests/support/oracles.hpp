#pragma once

#include <limits>

#include "bregprox/function_core.hpp"

namespace bregprox::testing {

// Euclidean projection onto the simplex by enumerating every support set and
// solving its KKT system exactly; keeps the closest feasible candidate.
// Exponential in n, meant for n <= 10.
inline Vector brute_force_simplex_projection(const Vector& z) {
  const Index n = z.size();
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sum += z[i];
        ++count;
      }
    const double tau = (sum - 1.0) / count;
    Vector x = Vector::Zero(n);
    bool feasible = true;
    for (Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        x[i] = z[i] - tau;
        if (x[i] < 0) feasible = false;
      } else if (z[i] - tau > 0) {
        feasible = false;  // multiplier for x_i >= 0 would be negative
      }
    }
    if (!feasible) continue;
    const double dist = (x - z).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

}  // namespace bregprox::testing
