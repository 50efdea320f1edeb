#include "bregprox/solvers.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "bregprox/errors.hpp"
#include "bregprox/random.hpp"

namespace bregprox {

void SolverConfig::validate() const {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ContractViolation("SolverConfig: eta0 must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("SolverConfig: alpha must lie in (0, 1)");
  if (max_backtracks_per_iter < 1)
    throw ContractViolation("SolverConfig: max_backtracks_per_iter must be >= 1");
  if (tolerance && !(*tolerance >= 0.0)) throw ContractViolation("SolverConfig: tolerance must be >= 0");
}

Vector step_bpga(const CompositeProblem& p, const BregmanGenerator& H, const ProxMap& pm,
                 const Vector& x_k, double eta) {
  if (pm.h_kind() != H.kind() || pm.g_kind() != p.g.kind())
    throw ContractViolation("step_bpga: prox map does not match (g, H)");
  if (!H.domain().interior(x_k)) throw DomainError("step_bpga: x_k is not interior to dom H");
  return pm.solve(p.f.gradient(x_k), x_k, eta);
}

Vector step_pga(const CompositeProblem& p, const ProxMap& pm, const Vector& x_k, double eta) {
  if (pm.h_kind() != GeneratorKind::squared_euclidean)
    throw ContractViolation("step_pga: prox map must use the squared Euclidean generator");
  return step_bpga(p, pm.H(), pm, x_k, eta);
}

double gppa_objective(const CompositeProblem& p, const BregmanGenerator& h, const Vector& x,
                      const Vector& x_k) {
  const double F = evaluate_composite(p, x);
  if (F == kInfinity) return kInfinity;
  return F + bregman_distance(h, x, x_k);
}

double bpga_objective(const CompositeProblem& p, const BregmanGenerator& H, const Vector& x,
                      const Vector& x_k, double eta) {
  const double gx = p.g.value(x);
  if (gx == kInfinity) return kInfinity;
  return gx + x.dot(p.f.gradient(x_k)) + bregman_distance(H, x, x_k) / eta;
}

IterationTrace run_solver(const CompositeProblem& p, const BregmanGenerator& H, const ProxMap& pm,
                          const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != p.dimension()) throw ContractViolation("run_solver: x0 has the wrong dimension");
  if (!H.domain().interior(x0)) throw DomainError("run_solver: x0 is not interior to dom H");
  const double F0 = evaluate_composite(p, x0);
  if (!std::isfinite(F0)) throw DomainError("run_solver: F(x0) is not finite");

  IterationTrace trace;
  trace.config = cfg;
  trace.problem_id = p.id;
  trace.generator_kind = H.kind();

  const auto gamma = p.f.gamma();
  if (!cfg.line_search_enabled && gamma && cfg.eta0 > *gamma * (1.0 + 1e-12)) {
    const std::string note =
        fmt::format("constant step eta = {} exceeds gamma = {}; rate certificates do not apply",
                    cfg.eta0, *gamma);
    spdlog::warn("{}: {}", p.id, note);
    trace.notes.push_back(note);
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  auto reached_tolerance = [&](double objective) {
    return cfg.tolerance && p.optimum && objective - p.optimum->value <= *cfg.tolerance;
  };

  trace.records.push_back({0, x0, F0, cfg.eta0, 0, 0.0, 0.0});
  double eta = cfg.eta0;
  bool noted_large_accept = false;

  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    if (reached_tolerance(trace.records.back().objective)) break;
    const Vector& x_k = trace.records.back().x;
    const Vector grad = p.f.gradient(x_k);

    std::size_t backtracks = 0;
    Vector candidate;
    double d_hk = 0.0;
    for (;;) {
      candidate = pm.solve(grad, x_k, eta);
      d_hk = bregman_distance(composite_generator_unchecked(H, p.f, eta), candidate, x_k);
      if (!cfg.line_search_enabled || d_hk >= -kLineSearchSlack) break;
      if (backtracks == cfg.max_backtracks_per_iter) {
        throw SolverFailure(
            fmt::format("{}: backtracking budget ({}) exhausted at iteration {} (eta = {})", p.id,
                        cfg.max_backtracks_per_iter, k + 1, eta),
            std::move(trace));
      }
      eta *= cfg.alpha;
      ++backtracks;
    }

    if (cfg.line_search_enabled && gamma && eta > *gamma && !noted_large_accept) {
      trace.notes.push_back(fmt::format(
          "iteration {}: step eta = {} above gamma = {} accepted by the line-search test", k + 1,
          eta, *gamma));
      noted_large_accept = true;
    }

    const double objective = evaluate_composite(p, candidate);
    if (!std::isfinite(objective))
      throw NumericalFailure(fmt::format("{}: non-finite objective at iteration {}", p.id, k + 1));
    trace.records.push_back({k + 1, std::move(candidate), objective, eta, backtracks, d_hk, elapsed()});
  }
  return trace;
}

EquivalenceReport verify_theorem2_equivalence(const CompositeProblem& p,
                                              const BregmanGenerator& H, const ProxMap& pm,
                                              const Vector& x0, double eta, std::size_t iters,
                                              std::uint64_t seed, std::size_t perturbations,
                                              std::size_t offset_points) {
  const BregmanGenerator h = composite_generator(H, p.f, eta);
  CounterRng rng(seed);
  EquivalenceReport report;
  Vector x_k = x0;
  for (std::size_t k = 0; k < iters; ++k) {
    const Vector next = step_bpga(p, H, pm, x_k, eta);
    const double best = gppa_objective(p, h, next, x_k);
    for (std::size_t s = 0; s < perturbations; ++s) {
      const double t = std::pow(10.0, -static_cast<double>(s % 7));
      const Vector z = pm.feasible_perturbation(next, t, rng);
      const double obj = gppa_objective(p, h, z, x_k);
      if (std::isfinite(obj)) report.worst_violation = std::max(report.worst_violation, best - obj);
    }

    // The two objectives differ by f(x_k) - <x_k, grad f(x_k)>, independent of x.
    std::vector<double> offsets;
    offsets.reserve(offset_points);
    for (std::size_t s = 0; s < offset_points; ++s) {
      const Vector z = pm.feasible_perturbation(next, 1.0, rng);
      offsets.push_back(gppa_objective(p, h, z, x_k) - bpga_objective(p, H, z, x_k, eta));
    }
    if (offsets.size() > 1) {
      double mean = 0.0;
      for (double o : offsets) mean += o;
      mean /= static_cast<double>(offsets.size());
      double var = 0.0;
      for (double o : offsets) var += (o - mean) * (o - mean);
      const double spread = std::sqrt(var / static_cast<double>(offsets.size() - 1));
      report.worst_offset_spread = std::max(report.worst_offset_spread, spread);
    }

    x_k = next;
    ++report.steps;
  }
  return report;
}

}  // namespace bregprox
