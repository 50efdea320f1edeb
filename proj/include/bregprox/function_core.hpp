#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace bregprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

enum class DomainKind { real_space, simplex, nonnegative_orthant };

/// Closed set C-bar together with its interior C.
///
/// Simplex membership allows |sum - 1| <= 1e-9 and x >= 0; the interior
/// additionally needs every coordinate >= 1e-300. Interior implies member.
class DomainDescriptor {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kInteriorFloor = 1e-300;

  DomainDescriptor(DomainKind kind, Index dimension);

  static DomainDescriptor real_space(Index n) { return {DomainKind::real_space, n}; }
  static DomainDescriptor simplex(Index n) { return {DomainKind::simplex, n}; }
  static DomainDescriptor orthant(Index n) { return {DomainKind::nonnegative_orthant, n}; }

  DomainKind kind() const { return kind_; }
  Index dimension() const { return dimension_; }

  bool member(const Vector& x) const;
  bool interior(const Vector& x) const;

 private:
  DomainKind kind_;
  Index dimension_;
};

std::string to_string(DomainKind kind);

// ---------------------------------------------------------------------------
// Smooth part f
// ---------------------------------------------------------------------------

/// f(x) = (scale / 2) * ||A x - b||^2, kept explicitly so that the Lipschitz
/// constant of the gradient is computable.
struct QuadraticData {
  Matrix A;
  Vector b;
  double scale = 1.0;
};

/// Convex differentiable f with value/gradient oracles and an optional
/// Lipschitz constant L = 1/gamma of its gradient. Immutable; oracles are pure.
class SmoothFunction {
 public:
  using ValueOracle = std::function<double(const Vector&)>;
  using GradientOracle = std::function<Vector(const Vector&)>;

  SmoothFunction(Index dimension, ValueOracle value, GradientOracle gradient,
                 std::optional<double> lipschitz_grad = std::nullopt);

  /// f(x) = (scale/2)||Ax - b||^2. When lipschitz_grad is not supplied it is
  /// estimated as scale * lambda_max(A^T A) by power iteration.
  static SmoothFunction least_squares(Matrix A, Vector b, double scale = 1.0,
                                      std::optional<double> lipschitz_grad = std::nullopt);

  /// f(x) = (1/(2 gamma)) ||x - b||^2, with gradient Lipschitz constant 1/gamma.
  static SmoothFunction scaled_squared_distance(const Vector& b, double gamma);

  static SmoothFunction zero(Index dimension);

  Index dimension() const { return dimension_; }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  std::optional<double> lipschitz_grad() const { return lipschitz_; }

  /// 1/L, or nullopt when L is unknown. Zero functions report +inf.
  std::optional<double> gamma() const;

  const QuadraticData* quadratic() const { return quadratic_.get(); }
  bool is_zero() const { return is_zero_; }

 private:
  Index dimension_;
  ValueOracle value_;
  GradientOracle gradient_;
  std::optional<double> lipschitz_;
  std::shared_ptr<const QuadraticData> quadratic_;
  bool is_zero_ = false;
};

/// D_f(x, y) = f(x) - f(y) - <x - y, grad f(y)>. Uses the exact form
/// (scale/2)||A(x - y)||^2 for quadratics.
double smooth_bregman_distance(const SmoothFunction& f, const Vector& x, const Vector& y);

// ---------------------------------------------------------------------------
// Nonsmooth part g
// ---------------------------------------------------------------------------

enum class NonsmoothKind { zero, l1, simplex_indicator };

std::string to_string(NonsmoothKind kind);

/// Proper closed convex g from one of the closed-form families.
/// Returns +inf outside dom g (in-band, not an error).
class NonsmoothTerm {
 public:
  NonsmoothTerm(NonsmoothKind kind, Index dimension);

  static NonsmoothTerm zero(Index n) { return {NonsmoothKind::zero, n}; }
  static NonsmoothTerm l1(Index n) { return {NonsmoothKind::l1, n}; }
  static NonsmoothTerm simplex_indicator(Index n) { return {NonsmoothKind::simplex_indicator, n}; }

  NonsmoothKind kind() const { return kind_; }
  Index dimension() const { return dimension_; }
  double value(const Vector& x) const;

 private:
  NonsmoothKind kind_;
  Index dimension_;
};

// ---------------------------------------------------------------------------
// Composite problem F = f + g
// ---------------------------------------------------------------------------

struct ReferenceOptimum {
  Vector x;
  double value = 0.0;
};

struct CompositeProblem {
  CompositeProblem(std::string id, SmoothFunction f, NonsmoothTerm g, DomainDescriptor domain,
                   std::optional<ReferenceOptimum> optimum = std::nullopt);

  std::string id;
  SmoothFunction f;
  NonsmoothTerm g;
  DomainDescriptor domain;
  std::optional<ReferenceOptimum> optimum;

  Index dimension() const { return f.dimension(); }
};

/// F(x) = f(x) + g(x); +inf whenever g(x) = +inf.
double evaluate_composite(const CompositeProblem& p, const Vector& x);

/// Max over coordinates of |central difference - grad_i| / (1 + |grad_i|).
double check_gradient(const SmoothFunction& f, const Vector& x, double h = 1e-6);

/// Power-iteration estimate of lambda_max(A^T A). Stops when successive
/// Rayleigh quotients agree to 1e-10 relative, or after `iterations` steps.
double estimate_spectral_norm(const Matrix& A, int iterations = 1000, std::uint64_t seed = 0);

}  // namespace bregprox
