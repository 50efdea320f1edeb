#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bregprox/bregman.hpp"
#include "bregprox/function_core.hpp"
#include "bregprox/rates.hpp"
#include "bregprox/solvers.hpp"

namespace bregprox {

enum class StepMode { constant, line_search };

/// Generator kind x step mode. Names: pga-constant, pga-linesearch,
/// md-constant, md-linesearch (md = mirror descent, entropy generator).
struct Variant {
  GeneratorKind generator = GeneratorKind::squared_euclidean;
  StepMode mode = StepMode::constant;

  std::string name() const;
  static Variant parse(const std::string& name);
  static std::vector<Variant> all();

  bool operator==(const Variant&) const = default;
};

struct ExperimentSpec {
  std::string name = "simplex-ls";
  Index rows = 50;
  Index cols = 100;
  std::uint64_t seed = 42;
  double eta0 = 100.0;
  double alpha = 0.5;
  std::size_t max_iters = 2000;
  std::vector<Variant> variants = Variant::all();
  /// Constant-step PGA iterations used for the reference optimum.
  std::size_t reference_iters = 100000;

  void validate() const;
};

/// f = 1/2 ||Ax - b||^2 on the simplex, with the data that produced it.
struct SimplexLsInstance {
  CompositeProblem problem;
  double lambda_max = 0.0;  // of A^T A
  double gamma = 0.0;       // 1 / lambda_max
};

/// Seeded standard-normal A (column-major draw order) and b, then b and every
/// column of A normalized to unit length; g = simplex indicator.
SimplexLsInstance build_simplex_ls(const ExperimentSpec& spec);

/// f = (1/(2 gamma)) ||x - b||^2, g = ||x||_1, with the closed-form optimum
/// x*_i = sign(b_i) max(|b_i| - gamma, 0).
CompositeProblem build_lasso_onestep(double gamma, const Vector& b);

/// Uniform interior start 1/n (equals 1e-3 * ones at n = 1000).
Vector uniform_start(Index n);

struct ReferenceRun {
  ReferenceOptimum optimum;
  std::size_t iterations = 0;
  /// Relative objective change over the 100 confirmation iterations < 1e-13.
  bool stagnated = false;
};

/// Constant-step PGA at eta = gamma for `iters` iterations plus 100
/// confirmation iterations. The returned optimum is the best iterate seen.
ReferenceRun compute_simplex_reference(const CompositeProblem& p, double gamma, std::size_t iters);

struct VariantResult {
  Variant variant;
  std::optional<IterationTrace> trace;
  /// Set when the solver failed; the trace then holds the partial run.
  std::optional<std::string> failure;
  std::optional<RateCertificate> certificate;
  std::optional<RateCertificate> classical;
  double certificate_margin = 0.0;
  std::optional<std::size_t> iters_to_tol;
  double step_size = 0.0;  // constant step, or eta0 for line search
};

struct ExperimentResult {
  ExperimentSpec spec;
  double gamma = 0.0;
  ReferenceRun reference;
  double tolerance = 0.0;  // 1e-6 (1 + |F*|)
  Vector x0;
  std::vector<VariantResult> variants;

  const VariantResult& variant(const Variant& v) const;
};

/// Certificate margins below this count as failures.
inline constexpr double kCertificateSlack = 1e-9;

/// First k with F(x_k) - F* <= tol, if any.
std::optional<std::size_t> iterations_to_tolerance(const IterationTrace& trace, double f_star,
                                                   double tol);

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace bregprox
