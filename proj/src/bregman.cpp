#include "bregprox/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "bregprox/errors.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

namespace {

double entropy_value(const Vector& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) s += x[i] * std::log(x[i]);
  return s;
}

/// Generalized KL: sum x ln(x/y) - x + y, with 0 ln 0 = 0.
double kl_divergence(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double term = x[i] > 0.0 ? x[i] * std::log(x[i] / y[i]) - x[i] + y[i] : y[i];
    s += term;
  }
  return s;
}

DomainDescriptor shared_domain(const DomainDescriptor& a, const DomainDescriptor& b) {
  if (a.dimension() != b.dimension())
    throw ContractViolation(fmt::format("generator dimensions differ ({} vs {})", a.dimension(),
                                        b.dimension()));
  if (a.kind() == b.kind()) return a;
  if (a.kind() == DomainKind::real_space) return b;
  if (b.kind() == DomainKind::real_space) return a;
  throw ContractViolation(fmt::format("generators have incompatible domains ({} vs {})",
                                      to_string(a.kind()), to_string(b.kind())));
}

void require_distance_args(const BregmanGenerator& h, const Vector& x, const Vector& y) {
  if (x.size() != h.dimension() || y.size() != h.dimension())
    throw ContractViolation("bregman_distance: dimension mismatch");
  if (!h.domain().member(x)) throw DomainError("bregman_distance: x lies outside the closed domain");
  if (!h.domain().interior(y)) throw DomainError("bregman_distance: y is not an interior point");
}

std::once_flag entropy_caveat_logged;

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::squared_euclidean: return "squared_euclidean";
    case GeneratorKind::negative_entropy: return "negative_entropy";
    case GeneratorKind::composite: return "composite";
    case GeneratorKind::linear_combination: return "linear_combination";
    case GeneratorKind::smooth_function: return "smooth_function";
  }
  return "unknown";
}

BregmanGenerator::BregmanGenerator(GeneratorKind kind, DomainDescriptor domain,
                                   ValueOracle value, GradientOracle gradient,
                                   double strong_convexity, ConvexityNorm norm,
                                   DistanceOracle distance)
    : kind_(kind),
      domain_(domain),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      strong_convexity_(strong_convexity),
      norm_(norm),
      distance_(std::move(distance)) {
  if (!value_ || !gradient_) throw ContractViolation("generator needs value and gradient oracles");
  if (!(strong_convexity_ >= 0.0)) throw ContractViolation("strong convexity must be >= 0");
}

double BregmanGenerator::value(const Vector& x) const {
  if (x.size() != dimension()) throw ContractViolation("generator value: dimension mismatch");
  if (!domain_.member(x)) return kInfinity;
  return value_(x);
}

Vector BregmanGenerator::gradient(const Vector& x) const {
  if (x.size() != dimension()) throw ContractViolation("generator gradient: dimension mismatch");
  if (!domain_.interior(x)) throw DomainError("generator gradient: point is not interior");
  return gradient_(x);
}

BregmanGenerator squared_euclidean(Index n) {
  return BregmanGenerator(
      GeneratorKind::squared_euclidean, DomainDescriptor::real_space(n),
      [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) -> Vector { return x; }, 1.0, ConvexityNorm::l2,
      [](const Vector& x, const Vector& y) { return 0.5 * (x - y).squaredNorm(); });
}

BregmanGenerator negative_entropy(Index n) {
  return BregmanGenerator(
      GeneratorKind::negative_entropy, DomainDescriptor::simplex(n), entropy_value,
      [](const Vector& x) -> Vector { return (x.array().log() + 1.0).matrix(); }, 1.0,
      ConvexityNorm::l1_on_simplex, kl_divergence);
}

BregmanGenerator scaled(const BregmanGenerator& H, double c) {
  if (!(c > 0.0)) throw ContractViolation("scaled: factor must be positive");
  BregmanGenerator::DistanceOracle distance;
  if (H.has_closed_form_distance())
    distance = [H, c](const Vector& x, const Vector& y) { return c * H.closed_form_distance(x, y); };
  return BregmanGenerator(
      GeneratorKind::linear_combination, H.domain(),
      [H, c](const Vector& x) { return c * H.value(x); },
      [H, c](const Vector& x) -> Vector { return c * H.gradient(x); }, c * H.strong_convexity(),
      H.strong_convexity_norm(), std::move(distance));
}

BregmanGenerator sum(const BregmanGenerator& h1, const BregmanGenerator& h2) {
  const DomainDescriptor domain = shared_domain(h1.domain(), h2.domain());
  return BregmanGenerator(
      GeneratorKind::linear_combination, domain,
      [h1, h2](const Vector& x) { return h1.value(x) + h2.value(x); },
      [h1, h2](const Vector& x) -> Vector { return h1.gradient(x) + h2.gradient(x); },
      h1.strong_convexity() + h2.strong_convexity());
}

BregmanGenerator difference(const BregmanGenerator& h1, const BregmanGenerator& h2) {
  const DomainDescriptor domain = shared_domain(h1.domain(), h2.domain());
  return BregmanGenerator(
      GeneratorKind::linear_combination, domain,
      [h1, h2](const Vector& x) { return h1.value(x) - h2.value(x); },
      [h1, h2](const Vector& x) -> Vector { return h1.gradient(x) - h2.gradient(x); }, 0.0);
}

BregmanGenerator as_generator(const SmoothFunction& f) {
  return BregmanGenerator(
      GeneratorKind::smooth_function, DomainDescriptor::real_space(f.dimension()),
      [f](const Vector& x) { return f.value(x); },
      [f](const Vector& x) -> Vector { return f.gradient(x); }, 0.0, ConvexityNorm::l2,
      [f](const Vector& x, const Vector& y) { return smooth_bregman_distance(f, x, y); });
}

BregmanGenerator composite_generator_unchecked(const BregmanGenerator& H,
                                               const SmoothFunction& f, double eta) {
  if (!(eta > 0.0)) throw ContractViolation("composite_generator: eta must be positive");
  if (H.dimension() != f.dimension())
    throw ContractViolation("composite_generator: H and f dimensions differ");
  const double inv_eta = 1.0 / eta;
  const double lipschitz = f.lipschitz_grad().value_or(0.0);
  return BregmanGenerator(
      GeneratorKind::composite, H.domain(),
      [H, f, inv_eta](const Vector& x) { return inv_eta * H.value(x) - f.value(x); },
      [H, f, inv_eta](const Vector& x) -> Vector { return inv_eta * H.gradient(x) - f.gradient(x); },
      std::max(0.0, inv_eta * H.strong_convexity() - lipschitz), H.strong_convexity_norm(),
      [H, f, inv_eta](const Vector& x, const Vector& y) {
        const double dH =
            H.has_closed_form_distance() ? H.closed_form_distance(x, y) : bregman_distance_direct(H, x, y);
        return inv_eta * dH - smooth_bregman_distance(f, x, y);
      });
}

BregmanGenerator composite_generator(const BregmanGenerator& H, const SmoothFunction& f,
                                     double eta) {
  const double sigma = H.strong_convexity();
  if (!(sigma > 0.0))
    throw HypothesisViolation("composite_generator: H must be strongly convex (sigma > 0)");
  const auto lipschitz = f.lipschitz_grad();
  if (!lipschitz)
    throw HypothesisViolation("composite_generator: Lipschitz constant of grad f is unknown");
  // sigma >= eta / gamma, i.e. sigma >= eta * L; relative slack for eta == gamma.
  if (sigma < eta * *lipschitz * (1.0 - 1e-12))
    throw HypothesisViolation(fmt::format(
        "composite_generator: sigma = {} < eta / gamma = {}", sigma, eta * *lipschitz));
  if (H.strong_convexity_norm() == ConvexityNorm::l1_on_simplex) {
    std::call_once(entropy_caveat_logged, [] {
      spdlog::info(
          "composite generator: H is strongly convex in the l1 norm on the simplex; "
          "the l2 hypothesis is taken from ||.||_1 >= ||.||_2");
    });
  }
  return composite_generator_unchecked(H, f, eta);
}

double bregman_distance_direct(const BregmanGenerator& h, const Vector& x, const Vector& y) {
  require_distance_args(h, x, y);
  return h.value(x) - h.value(y) - (x - y).dot(h.gradient(y));
}

double bregman_distance(const BregmanGenerator& h, const Vector& x, const Vector& y) {
  require_distance_args(h, x, y);
  if (h.has_closed_form_distance()) return h.closed_form_distance(x, y);
  return h.value(x) - h.value(y) - (x - y).dot(h.gradient(y));
}

IdentityResidual check_three_point(const BregmanGenerator& h, const Vector& a, const Vector& b,
                                   const Vector& c) {
  if (!h.domain().interior(a) || !h.domain().interior(b))
    throw DomainError("check_three_point: a and b must be interior points");
  const double d_ca = bregman_distance(h, c, a);
  const double d_ab = bregman_distance(h, a, b);
  const double d_cb = bregman_distance(h, c, b);
  const Vector gb = h.gradient(b);
  const Vector ga = h.gradient(a);
  const double inner = (gb - ga).dot(c - a);
  const double magnitude = std::abs(d_ca) + std::abs(d_ab) + std::abs(d_cb) +
                           (gb.cwiseAbs() + ga.cwiseAbs()).dot((c - a).cwiseAbs());
  return {std::abs(d_ca + d_ab - d_cb - inner), magnitude};
}

LinearityResidual check_linearity(const BregmanGenerator& h1, const BregmanGenerator& h2,
                                  const Vector& a, const Vector& b) {
  const BregmanGenerator plus = sum(h1, h2);
  const BregmanGenerator minus = difference(h1, h2);
  const double d1 = bregman_distance(h1, a, b);
  const double d2 = bregman_distance(h2, a, b);
  const double dp = bregman_distance(plus, a, b);
  const double dm = bregman_distance(minus, a, b);
  // The definitional formula cancels h(a) - h(b) - <a - b, grad h(b)>, so the
  // sizes of those terms bound the rounding in D_{h1 +- h2}.
  const double scale = std::abs(h1.value(a)) + std::abs(h1.value(b)) + std::abs(h2.value(a)) +
                       std::abs(h2.value(b)) +
                       (h1.gradient(b).cwiseAbs() + h2.gradient(b).cwiseAbs()).dot((a - b).cwiseAbs());
  return {{std::abs(d1 + d2 - dp), scale}, {std::abs(d1 - d2 - dm), scale}};
}

ProximalDistanceAxioms verify_proximal_distance_axioms(const BregmanGenerator& h,
                                                       std::size_t samples,
                                                       std::uint64_t seed) {
  if (samples < 100) throw ContractViolation("verify_proximal_distance_axioms: need >= 100 samples");
  CounterRng rng(seed);
  const Index n = h.dimension();
  const bool on_simplex = h.domain().kind() == DomainKind::simplex;

  auto interior_point = [&]() -> Vector {
    if (on_simplex) return rng.simplex_point(n);
    if (h.domain().kind() == DomainKind::nonnegative_orthant)
      return rng.normal_vector(n).cwiseAbs().array() + 1e-3;
    return rng.normal_vector(n);
  };
  // Nearby point at a random scale in [1e-6, 1], kept inside the domain.
  auto nearby = [&](const Vector& y) -> Vector {
    const double t = std::pow(10.0, -6.0 * rng.uniform());
    if (on_simplex) return (1.0 - t) * y + t * rng.simplex_point(n);
    return y + t * rng.normal_vector(n);
  };

  ProximalDistanceAxioms out;
  out.nonnegativity_holds = true;
  out.identity_of_indiscernibles_holds = true;
  out.convex_in_first_arg_holds = true;
  out.level_set_checked = h.kind() == GeneratorKind::squared_euclidean ||
                          h.kind() == GeneratorKind::negative_entropy;
  out.bounded_level_set_holds = out.level_set_checked;

  for (std::size_t s = 0; s < samples; ++s) {
    const Vector y = interior_point();
    const Vector x = (s % 2 == 0) ? interior_point() : nearby(y);
    const double d = bregman_distance(h, x, y);

    if (d < -1e-12) {
      out.nonnegativity_holds = false;
      out.worst_negative_distance = std::min(out.worst_negative_distance, d);
    }
    if (std::abs(bregman_distance(h, y, y)) > 1e-12) out.identity_of_indiscernibles_holds = false;
    // Both registered generators give D >= 5e-9 once ||x - y|| >= 1e-4.
    if (d < 1e-12 && (x - y).norm() >= 1e-4) out.identity_of_indiscernibles_holds = false;

    const Vector x2 = interior_point();
    const double lambda = rng.uniform();
    const Vector mid = lambda * x + (1.0 - lambda) * x2;
    const double d2 = bregman_distance(h, x2, y);
    const double dmid = bregman_distance(h, mid, y);
    if (dmid > lambda * d + (1.0 - lambda) * d2 + 1e-12 * (1.0 + std::abs(d) + std::abs(d2)))
      out.convex_in_first_arg_holds = false;

    // Analytic caps: {D <= alpha} is the ball of radius sqrt(2 alpha) for the
    // quadratic; for entropy Pinsker gives ||x - y||_1 <= sqrt(2 KL).
    if (out.level_set_checked) {
      const double dist = h.kind() == GeneratorKind::squared_euclidean ? (x - y).norm()
                                                                        : (x - y).lpNorm<1>();
      if (dist > std::sqrt(2.0 * std::max(d, 0.0)) * (1.0 + 1e-9) + 1e-12)
        out.bounded_level_set_holds = false;
    }
  }
  return out;
}

}  // namespace bregprox
