#include "bregprox/identity_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bregprox/bregman.hpp"
#include "bregprox/experiments.hpp"
#include "bregprox/prox_ops.hpp"
#include "bregprox/random.hpp"
#include "bregprox/solvers.hpp"

namespace bregprox {

namespace {

BregmanGenerator corrupted_squared_euclidean(Index n) {
  return BregmanGenerator(
      GeneratorKind::squared_euclidean, DomainDescriptor::real_space(n),
      [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) -> Vector { return 2.0 * x; }, 1.0, ConvexityNorm::l2,
      [](const Vector& x, const Vector& y) { return 0.5 * (x - y).squaredNorm(); });
}

/// A simplex point with one coordinate occasionally zeroed (closed domain).
Vector closed_simplex_point(CounterRng& rng, Index n) {
  Vector x = rng.simplex_point(n);
  if (n > 1 && rng.uniform() < 0.25) {
    x[static_cast<Index>(rng() % static_cast<std::uint64_t>(n))] = 0.0;
    x /= x.sum();
  }
  return x;
}

SmoothFunction random_least_squares(CounterRng& rng, Index rows, Index cols) {
  return SmoothFunction::least_squares(rng.normal_matrix(rows, cols), rng.normal_vector(rows));
}

SuiteResult finish(std::string name, double worst, double threshold, std::size_t samples,
                   bool lower_is_better = true) {
  const bool passed = lower_is_better ? worst <= threshold : worst >= threshold;
  return {std::move(name), worst, threshold, lower_is_better, samples, passed};
}

}  // namespace

std::vector<SuiteResult> run_identity_suites(const IdentitySuiteOptions& options) {
  const Index n = options.dimension;
  const std::size_t samples = options.samples;
  CounterRng rng(options.seed);
  std::vector<SuiteResult> results;

  const BregmanGenerator quad =
      options.corrupt_gradient ? corrupted_squared_euclidean(n) : squared_euclidean(n);
  const BregmanGenerator entropy = negative_entropy(n);
  const SmoothFunction f = random_least_squares(rng, 3, n);
  const double gamma = *f.gamma();
  const BregmanGenerator composite_quad = composite_generator(quad, f, gamma);
  const BregmanGenerator composite_entropy = composite_generator(entropy, f, 0.5 * gamma);

  // Nonnegativity of D_h.
  {
    double worst = kInfinity;
    for (std::size_t s = 0; s < samples; ++s) {
      const Vector x = rng.normal_vector(n), y = rng.normal_vector(n);
      worst = std::min({worst, bregman_distance(quad, x, y), bregman_distance(composite_quad, x, y)});
    }
    results.push_back(finish("nonnegativity/squared_euclidean", worst, -1e-12, samples, false));
  }
  {
    double worst = kInfinity;
    for (std::size_t s = 0; s < samples; ++s) {
      const Vector x = closed_simplex_point(rng, n), y = rng.simplex_point(n);
      worst = std::min({worst, bregman_distance(entropy, x, y),
                        bregman_distance(composite_entropy, x, y)});
    }
    results.push_back(finish("nonnegativity/negative_entropy", worst, -1e-12, samples, false));
  }

  // Three-point identity.
  auto three_point = [&](const std::string& name, const BregmanGenerator& h,
                         const std::function<Vector()>& interior,
                         const std::function<Vector()>& closed) {
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const Vector a = interior(), b = interior(), c = closed();
      worst = std::max(worst, check_three_point(h, a, b, c).relative());
    }
    results.push_back(finish(name, worst, 1e-10, samples));
  };
  auto normal = [&] { return rng.normal_vector(n); };
  auto simplex_interior = [&] { return rng.simplex_point(n); };
  auto simplex_closed = [&] { return closed_simplex_point(rng, n); };
  three_point("three_point/squared_euclidean", quad, normal, normal);
  three_point("three_point/negative_entropy", entropy, simplex_interior, simplex_closed);
  three_point("three_point/composite", composite_quad, normal, normal);

  // Linearity, both signs.
  {
    double worst = 0.0;
    const BregmanGenerator scaled_H = scaled(quad, 1.0 / gamma);
    const BregmanGenerator f_gen = as_generator(f);
    for (std::size_t s = 0; s < samples; ++s) {
      const Vector a = closed_simplex_point(rng, n), b = rng.simplex_point(n);
      const LinearityResidual mixed = check_linearity(quad, entropy, a, b);
      const Vector c = rng.normal_vector(n), d = rng.normal_vector(n);
      const LinearityResidual split = check_linearity(scaled_H, f_gen, c, d);
      worst = std::max({worst, mixed.plus.relative(), mixed.minus.relative(),
                        split.plus.relative(), split.minus.relative()});
    }
    results.push_back(finish("linearity", worst, 1e-10, samples));
  }

  // BPGA iterates minimize the GPPA objective; constant offset between the two.
  {
    const std::size_t perturbations = std::max<std::size_t>(100, samples / 10);
    const Vector b = 2.0 * rng.normal_vector(n);
    CompositeProblem lasso("identity-lasso", random_least_squares(rng, n + 2, n),
                           NonsmoothTerm::l1(n), DomainDescriptor::real_space(n));
    const EquivalenceReport quad_report = verify_theorem2_equivalence(
        lasso, quad, make_prox_map(lasso.g, quad), b, *lasso.f.gamma(), 10, rng(), perturbations);

    CompositeProblem simplex_ls("identity-simplex-ls", random_least_squares(rng, n + 2, n),
                                NonsmoothTerm::simplex_indicator(n), DomainDescriptor::simplex(n));
    const EquivalenceReport entropy_report = verify_theorem2_equivalence(
        simplex_ls, entropy, make_prox_map(simplex_ls.g, entropy), uniform_start(n),
        *simplex_ls.f.gamma(), 10, rng(), perturbations);

    results.push_back(finish("equivalence/argmin",
                             std::max(quad_report.worst_violation, entropy_report.worst_violation),
                             1e-9, 10 * perturbations));
    results.push_back(finish("equivalence/constant_offset",
                             std::max(quad_report.worst_offset_spread,
                                      entropy_report.worst_offset_spread),
                             1e-10, 10 * 100));
  }

  // Prox maps are global minimizers of their subproblems.
  {
    const std::size_t instances = 10;
    const std::size_t trials = std::max<std::size_t>(100, samples / instances);
    const ProxMap l1_map = make_prox_map(NonsmoothTerm::l1(n), quad);
    const ProxMap simplex_map = make_prox_map(NonsmoothTerm::simplex_indicator(n), quad);
    const ProxMap entropy_map = make_prox_map(NonsmoothTerm::simplex_indicator(n), entropy);
    double worst = -kInfinity;
    for (std::size_t i = 0; i < instances; ++i) {
      const double eta = rng.uniform(0.1, 2.0);
      worst = std::max(worst, verify_prox_optimality(l1_map, rng.normal_vector(n),
                                                     2.0 * rng.normal_vector(n), eta, trials, rng()));
      worst = std::max(worst, verify_prox_optimality(simplex_map, rng.normal_vector(n),
                                                     rng.normal_vector(n), eta, trials, rng()));
      worst = std::max(worst, verify_prox_optimality(entropy_map, rng.normal_vector(n),
                                                     rng.simplex_point(n), eta, trials, rng()));
    }
    results.push_back(finish("prox_optimality", worst, 1e-9, 3 * instances * trials));
  }

  return results;
}

}  // namespace bregprox
