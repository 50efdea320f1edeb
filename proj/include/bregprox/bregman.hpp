#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "bregprox/function_core.hpp"

namespace bregprox {

enum class GeneratorKind {
  squared_euclidean,   // 1/2 ||x||^2 on R^n
  negative_entropy,    // sum x_i ln x_i on the simplex, 0 ln 0 = 0
  composite,           // (1/eta) H - f
  linear_combination,  // scaled / summed / differenced generators
  smooth_function,     // a SmoothFunction viewed as a generator
};

std::string to_string(GeneratorKind kind);

/// Norm in which `strong_convexity` is measured.
enum class ConvexityNorm {
  l2,
  /// Holds in ||.||_1 on the simplex (Pinsker). Since ||.||_1 >= ||.||_2 the
  /// same constant also bounds the l2 modulus on the simplex.
  l1_on_simplex,
};

/// Legendre-type convex function h: value on the closed domain, gradient on
/// its interior. Optionally carries a closed-form expression for D_h that is
/// numerically better conditioned than the definitional formula.
class BregmanGenerator {
 public:
  using ValueOracle = std::function<double(const Vector&)>;
  using GradientOracle = std::function<Vector(const Vector&)>;
  using DistanceOracle = std::function<double(const Vector&, const Vector&)>;

  BregmanGenerator(GeneratorKind kind, DomainDescriptor domain, ValueOracle value,
                   GradientOracle gradient, double strong_convexity,
                   ConvexityNorm norm = ConvexityNorm::l2, DistanceOracle distance = {});

  GeneratorKind kind() const { return kind_; }
  const DomainDescriptor& domain() const { return domain_; }
  Index dimension() const { return domain_.dimension(); }
  double strong_convexity() const { return strong_convexity_; }
  ConvexityNorm strong_convexity_norm() const { return norm_; }

  /// +inf outside the closed domain.
  double value(const Vector& x) const;
  /// Throws DomainError outside the interior.
  Vector gradient(const Vector& x) const;

  bool has_closed_form_distance() const { return static_cast<bool>(distance_); }
  /// Unchecked closed-form D_h(x, y); only valid if has_closed_form_distance().
  double closed_form_distance(const Vector& x, const Vector& y) const { return distance_(x, y); }

 private:
  GeneratorKind kind_;
  DomainDescriptor domain_;
  ValueOracle value_;
  GradientOracle gradient_;
  double strong_convexity_;
  ConvexityNorm norm_;
  DistanceOracle distance_;
};

/// 1/2 ||x||_2^2 on R^n; sigma = 1.
BregmanGenerator squared_euclidean(Index n);

/// sum x_i ln x_i on the probability simplex; sigma = 1 in the l1 sense.
BregmanGenerator negative_entropy(Index n);

/// c * H (c > 0).
BregmanGenerator scaled(const BregmanGenerator& H, double c);

/// h1 + h2 and h1 - h2 built from the value/gradient oracles only, so their
/// distances always use the definitional formula. The domain is the more
/// restrictive of the two; incompatible domains are a contract violation.
BregmanGenerator sum(const BregmanGenerator& h1, const BregmanGenerator& h2);
BregmanGenerator difference(const BregmanGenerator& h1, const BregmanGenerator& h2);

/// View a smooth function as a generator on R^n (sigma = 0).
BregmanGenerator as_generator(const SmoothFunction& f);

/// h = (1/eta) H - f. Requires H.strong_convexity = sigma > 0, a known
/// Lipschitz constant 1/gamma for grad f, and sigma >= eta / gamma; otherwise
/// throws HypothesisViolation. For entropy H (sigma measured in l1) a one-time
/// caveat is logged.
BregmanGenerator composite_generator(const BregmanGenerator& H, const SmoothFunction& f,
                                     double eta);

/// Same construction without the hypothesis check (line search, negative tests).
BregmanGenerator composite_generator_unchecked(const BregmanGenerator& H,
                                               const SmoothFunction& f, double eta);

/// D_h(x, y) = h(x) - h(y) - <x - y, grad h(y)>, for x in the closed domain
/// and y in its interior. Uses the generator's closed form when it has one.
double bregman_distance(const BregmanGenerator& h, const Vector& x, const Vector& y);

/// The definitional formula, even when a closed form exists.
double bregman_distance_direct(const BregmanGenerator& h, const Vector& x, const Vector& y);

/// Absolute residual of an identity together with the magnitude of the terms
/// that entered it, so callers can apply tol * (1 + magnitude).
struct IdentityResidual {
  double residual = 0.0;
  double magnitude = 0.0;

  double relative() const { return residual / (1.0 + magnitude); }
  bool within(double tol) const { return residual <= tol * (1.0 + magnitude); }
};

/// |D(c,a) + D(a,b) - D(c,b) - <grad h(b) - grad h(a), c - a>| for a, b
/// interior and c in the closed domain.
IdentityResidual check_three_point(const BregmanGenerator& h, const Vector& a, const Vector& b,
                                   const Vector& c);

struct LinearityResidual {
  IdentityResidual plus;   // D_{h1} + D_{h2} vs D_{h1+h2}
  IdentityResidual minus;  // D_{h1} - D_{h2} vs D_{h1-h2}
};

LinearityResidual check_linearity(const BregmanGenerator& h1, const BregmanGenerator& h2,
                                  const Vector& a, const Vector& b);

struct ProximalDistanceAxioms {
  bool nonnegativity_holds = false;
  bool identity_of_indiscernibles_holds = false;
  bool convex_in_first_arg_holds = false;
  bool bounded_level_set_holds = false;
  /// Level sets are only checked for squared Euclidean and entropy kinds.
  bool level_set_checked = false;
  double worst_negative_distance = 0.0;

  bool admissible() const {
    return nonnegativity_holds && identity_of_indiscernibles_holds &&
           convex_in_first_arg_holds && bounded_level_set_holds;
  }
};

/// Randomized check of the proximal-distance axioms for D_h. Failures are
/// reported in the returned record, never thrown.
ProximalDistanceAxioms verify_proximal_distance_axioms(const BregmanGenerator& h,
                                                       std::size_t samples,
                                                       std::uint64_t seed);

}  // namespace bregprox
