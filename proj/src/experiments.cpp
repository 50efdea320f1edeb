#include "bregprox/experiments.hpp"

#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "bregprox/errors.hpp"
#include "bregprox/prox_ops.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

std::string Variant::name() const {
  const char* family = generator == GeneratorKind::negative_entropy ? "md" : "pga";
  const char* step = mode == StepMode::line_search ? "linesearch" : "constant";
  return fmt::format("{}-{}", family, step);
}

Variant Variant::parse(const std::string& name) {
  for (const Variant& v : all())
    if (v.name() == name) return v;
  throw ContractViolation(fmt::format("unknown variant '{}'", name));
}

std::vector<Variant> Variant::all() {
  return {{GeneratorKind::squared_euclidean, StepMode::constant},
          {GeneratorKind::squared_euclidean, StepMode::line_search},
          {GeneratorKind::negative_entropy, StepMode::constant},
          {GeneratorKind::negative_entropy, StepMode::line_search}};
}

void ExperimentSpec::validate() const {
  if (rows < 1 || cols < 1) throw ContractViolation("experiment: rows and cols must be >= 1");
  if (!(eta0 > 0.0)) throw ContractViolation("experiment: eta0 must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("experiment: alpha must lie in (0, 1)");
  if (max_iters < 1) throw ContractViolation("experiment: max_iters must be >= 1");
  if (variants.empty()) throw ContractViolation("experiment: no variants requested");
}

const VariantResult& ExperimentResult::variant(const Variant& v) const {
  for (const VariantResult& r : variants)
    if (r.variant == v) return r;
  throw ContractViolation(fmt::format("experiment has no variant '{}'", v.name()));
}

SimplexLsInstance build_simplex_ls(const ExperimentSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ContractViolation("build_simplex_ls: empty dimensions");
  CounterRng rng(spec.seed);
  Matrix A = rng.normal_matrix(spec.rows, spec.cols);
  Vector b = rng.normal_vector(spec.rows);
  for (Index j = 0; j < A.cols(); ++j) A.col(j).normalize();
  b.normalize();

  const double lambda_max = estimate_spectral_norm(A, 1000, spec.seed);
  const Index n = spec.cols;
  SmoothFunction f = SmoothFunction::least_squares(std::move(A), std::move(b), 1.0, lambda_max);
  return {CompositeProblem(fmt::format("{}-{}x{}-seed{}", spec.name, spec.rows, spec.cols, spec.seed),
                           std::move(f), NonsmoothTerm::simplex_indicator(n),
                           DomainDescriptor::simplex(n)),
          lambda_max, 1.0 / lambda_max};
}

CompositeProblem build_lasso_onestep(double gamma, const Vector& b) {
  if (!(gamma > 0.0)) throw ContractViolation("build_lasso_onestep: gamma must be positive");
  const Index n = b.size();
  Vector x_star(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = std::abs(b[i]) - gamma;
    x_star[i] = mag > 0.0 ? std::copysign(mag, b[i]) : 0.0;
  }
  CompositeProblem p("lasso-onestep", SmoothFunction::scaled_squared_distance(b, gamma),
                     NonsmoothTerm::l1(n), DomainDescriptor::real_space(n));
  p.optimum = ReferenceOptimum{x_star, evaluate_composite(p, x_star)};
  return p;
}

Vector uniform_start(Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

ReferenceRun compute_simplex_reference(const CompositeProblem& p, double gamma, std::size_t iters) {
  const ProxMap pm = make_prox_map(p.g, squared_euclidean(p.dimension()));
  Vector x = uniform_start(p.dimension());
  ReferenceRun run;
  run.optimum = {x, evaluate_composite(p, x)};
  auto advance = [&] {
    x = step_pga(p, pm, x, gamma);
    const double value = evaluate_composite(p, x);
    if (value < run.optimum.value) run.optimum = {x, value};
    ++run.iterations;
  };
  for (std::size_t k = 0; k < iters; ++k) advance();
  const double before = run.optimum.value;
  for (int k = 0; k < 100; ++k) advance();
  run.stagnated = std::abs(before - run.optimum.value) <= 1e-13 * std::max(1.0, std::abs(before));
  if (!run.stagnated)
    spdlog::warn("{}: reference objective still moving after {} iterations", p.id, run.iterations);
  return run;
}

std::optional<std::size_t> iterations_to_tolerance(const IterationTrace& trace, double f_star,
                                                   double tol) {
  for (const IterationRecord& rec : trace.records)
    if (rec.objective - f_star <= tol) return rec.k;
  return std::nullopt;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  SimplexLsInstance instance = build_simplex_ls(spec);
  ExperimentResult result;
  result.spec = spec;
  result.gamma = instance.gamma;
  result.reference = compute_simplex_reference(instance.problem, instance.gamma, spec.reference_iters);
  result.tolerance = 1e-6 * (1.0 + std::abs(result.reference.optimum.value));
  result.x0 = uniform_start(spec.cols);

  CompositeProblem problem = instance.problem;
  problem.optimum = result.reference.optimum;
  const double f_star = result.reference.optimum.value;

  for (const Variant& variant : spec.variants) {
    const BregmanGenerator H = variant.generator == GeneratorKind::negative_entropy
                                   ? negative_entropy(spec.cols)
                                   : squared_euclidean(spec.cols);
    const ProxMap pm = make_prox_map(problem.g, H);

    SolverConfig cfg;
    cfg.max_iters = spec.max_iters;
    cfg.alpha = spec.alpha;
    cfg.line_search_enabled = variant.mode == StepMode::line_search;
    cfg.eta0 = cfg.line_search_enabled ? spec.eta0 : instance.gamma;

    VariantResult vr;
    vr.variant = variant;
    vr.step_size = cfg.eta0;
    try {
      vr.trace = run_solver(problem, H, pm, result.x0, cfg);
    } catch (const SolverFailure& e) {
      vr.failure = e.what();
      vr.trace = e.partial_trace();
    } catch (const std::exception& e) {
      vr.failure = e.what();
    }

    if (cfg.line_search_enabled) {
      vr.certificate = make_line_search_certificate(problem, H, spec.alpha, spec.eta0, result.x0);
      vr.classical = vr.certificate;
    } else {
      vr.certificate = make_bpga_certificate(problem, H, cfg.eta0, result.x0);
      vr.classical = make_classical_certificate(problem, H, cfg.eta0, result.x0);
    }
    if (vr.trace) {
      vr.certificate_margin = certify_trace(*vr.trace, *vr.certificate);
      vr.iters_to_tol = iterations_to_tolerance(*vr.trace, f_star, result.tolerance);
    }
    result.variants.push_back(std::move(vr));
  }
  return result;
}

}  // namespace bregprox
