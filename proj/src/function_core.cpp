#include "bregprox/function_core.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bregprox/errors.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

namespace {

void require_dimension(const Vector& x, Index n, const char* what) {
  if (x.size() != n)
    throw ContractViolation(fmt::format("{}: expected dimension {}, got {}", what, n, x.size()));
}

}  // namespace

DomainDescriptor::DomainDescriptor(DomainKind kind, Index dimension)
    : kind_(kind), dimension_(dimension) {
  if (dimension <= 0) throw ContractViolation("domain dimension must be positive");
}

bool DomainDescriptor::member(const Vector& x) const {
  if (x.size() != dimension_ || !x.allFinite()) return false;
  switch (kind_) {
    case DomainKind::real_space:
      return true;
    case DomainKind::nonnegative_orthant:
      return (x.array() >= 0.0).all();
    case DomainKind::simplex:
      return (x.array() >= 0.0).all() && std::abs(x.sum() - 1.0) <= kSumTolerance;
  }
  return false;
}

bool DomainDescriptor::interior(const Vector& x) const {
  if (!member(x)) return false;
  switch (kind_) {
    case DomainKind::real_space:
      return true;
    case DomainKind::nonnegative_orthant:
      return (x.array() > 0.0).all();
    case DomainKind::simplex:
      return (x.array() >= kInteriorFloor).all();
  }
  return false;
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::real_space: return "real_space";
    case DomainKind::simplex: return "simplex";
    case DomainKind::nonnegative_orthant: return "nonnegative_orthant";
  }
  return "unknown";
}

std::string to_string(NonsmoothKind kind) {
  switch (kind) {
    case NonsmoothKind::zero: return "zero";
    case NonsmoothKind::l1: return "l1";
    case NonsmoothKind::simplex_indicator: return "simplex_indicator";
  }
  return "unknown";
}

SmoothFunction::SmoothFunction(Index dimension, ValueOracle value, GradientOracle gradient,
                               std::optional<double> lipschitz_grad)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      lipschitz_(lipschitz_grad) {
  if (dimension <= 0) throw ContractViolation("smooth function dimension must be positive");
  if (!value_ || !gradient_) throw ContractViolation("smooth function needs both oracles");
  if (lipschitz_ && !(*lipschitz_ >= 0.0 && std::isfinite(*lipschitz_)))
    throw ContractViolation("Lipschitz constant must be finite and nonnegative");
}

SmoothFunction SmoothFunction::least_squares(Matrix A, Vector b, double scale,
                                             std::optional<double> lipschitz_grad) {
  if (A.rows() != b.size())
    throw ContractViolation(fmt::format("least_squares: A has {} rows but b has {} entries",
                                        A.rows(), b.size()));
  if (!(scale > 0.0)) throw ContractViolation("least_squares: scale must be positive");
  auto data = std::make_shared<const QuadraticData>(QuadraticData{std::move(A), std::move(b), scale});
  if (!lipschitz_grad) lipschitz_grad = scale * estimate_spectral_norm(data->A);

  auto value = [data](const Vector& x) {
    return 0.5 * data->scale * (data->A * x - data->b).squaredNorm();
  };
  auto gradient = [data](const Vector& x) -> Vector {
    return data->scale * (data->A.transpose() * (data->A * x - data->b));
  };
  SmoothFunction f(data->A.cols(), value, gradient, lipschitz_grad);
  f.quadratic_ = data;
  return f;
}

SmoothFunction SmoothFunction::scaled_squared_distance(const Vector& b, double gamma) {
  if (!(gamma > 0.0)) throw ContractViolation("scaled_squared_distance: gamma must be positive");
  const Index n = b.size();
  return least_squares(Matrix::Identity(n, n), b, 1.0 / gamma, 1.0 / gamma);
}

SmoothFunction SmoothFunction::zero(Index dimension) {
  SmoothFunction f(
      dimension, [](const Vector&) { return 0.0; },
      [dimension](const Vector&) -> Vector { return Vector::Zero(dimension); }, 0.0);
  f.is_zero_ = true;
  return f;
}

double SmoothFunction::value(const Vector& x) const {
  require_dimension(x, dimension_, "SmoothFunction::value");
  return value_(x);
}

Vector SmoothFunction::gradient(const Vector& x) const {
  require_dimension(x, dimension_, "SmoothFunction::gradient");
  return gradient_(x);
}

std::optional<double> SmoothFunction::gamma() const {
  if (!lipschitz_) return std::nullopt;
  if (*lipschitz_ == 0.0) return kInfinity;
  return 1.0 / *lipschitz_;
}

double smooth_bregman_distance(const SmoothFunction& f, const Vector& x, const Vector& y) {
  require_dimension(x, f.dimension(), "smooth_bregman_distance");
  require_dimension(y, f.dimension(), "smooth_bregman_distance");
  if (f.is_zero()) return 0.0;
  if (const QuadraticData* q = f.quadratic()) return 0.5 * q->scale * (q->A * (x - y)).squaredNorm();
  return f.value(x) - f.value(y) - (x - y).dot(f.gradient(y));
}

NonsmoothTerm::NonsmoothTerm(NonsmoothKind kind, Index dimension)
    : kind_(kind), dimension_(dimension) {
  if (dimension <= 0) throw ContractViolation("nonsmooth term dimension must be positive");
}

double NonsmoothTerm::value(const Vector& x) const {
  require_dimension(x, dimension_, "NonsmoothTerm::value");
  switch (kind_) {
    case NonsmoothKind::zero:
      return 0.0;
    case NonsmoothKind::l1:
      return x.lpNorm<1>();
    case NonsmoothKind::simplex_indicator:
      return DomainDescriptor::simplex(dimension_).member(x) ? 0.0 : kInfinity;
  }
  return kInfinity;
}

CompositeProblem::CompositeProblem(std::string id_, SmoothFunction f_, NonsmoothTerm g_,
                                   DomainDescriptor domain_,
                                   std::optional<ReferenceOptimum> optimum_)
    : id(std::move(id_)),
      f(std::move(f_)),
      g(g_),
      domain(domain_),
      optimum(std::move(optimum_)) {
  if (f.dimension() != domain.dimension() || g.dimension() != domain.dimension())
    throw ContractViolation(fmt::format("problem '{}': f, g and domain dimensions differ ({}, {}, {})",
                                        id, f.dimension(), g.dimension(), domain.dimension()));
  if (optimum && optimum->x.size() != domain.dimension())
    throw ContractViolation("reference optimum has the wrong dimension");
}

double evaluate_composite(const CompositeProblem& p, const Vector& x) {
  require_dimension(x, p.dimension(), "evaluate_composite");
  const double gx = p.g.value(x);
  if (gx == kInfinity) return kInfinity;
  return p.f.value(x) + gx;
}

double check_gradient(const SmoothFunction& f, const Vector& x, double h) {
  require_dimension(x, f.dimension(), "check_gradient");
  if (!(h > 0.0)) throw ContractViolation("check_gradient: step must be positive");
  const Vector grad = f.gradient(x);
  if (!grad.allFinite()) throw NumericalFailure("check_gradient: gradient is not finite");
  double worst = 0.0;
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f.value(probe);
    probe[i] = x[i] - h;
    const double down = f.value(probe);
    probe[i] = x[i];
    if (!std::isfinite(up) || !std::isfinite(down))
      throw NumericalFailure(fmt::format("check_gradient: non-finite value along coordinate {}", i));
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[i]) / (1.0 + std::abs(grad[i])));
  }
  return worst;
}

double estimate_spectral_norm(const Matrix& A, int iterations, std::uint64_t seed) {
  if (iterations < 1) throw ContractViolation("estimate_spectral_norm: iterations must be >= 1");
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0)
    throw DegenerateInput("estimate_spectral_norm: matrix is zero");

  CounterRng rng(seed);
  Vector v = rng.normal_vector(A.cols());
  v.normalize();
  double rayleigh = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector Av = A * v;
    const double next = Av.squaredNorm();
    Vector w = A.transpose() * Av;
    const double norm = w.norm();
    if (norm == 0.0) throw DegenerateInput("estimate_spectral_norm: start vector in the null space");
    v = w / norm;
    const bool converged = it > 0 && std::abs(next - rayleigh) < 1e-10 * next;
    rayleigh = next;
    if (converged) break;
  }
  return rayleigh;
}

}  // namespace bregprox
