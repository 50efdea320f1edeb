#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bregprox/bregman.hpp"
#include "bregprox/function_core.hpp"
#include "bregprox/prox_ops.hpp"

namespace bregprox {

/// Acceptance slack for the line-search test D_{h_k}(x_{k+1}, x_k) >= 0.
inline constexpr double kLineSearchSlack = 1e-12;

struct SolverConfig {
  /// Initial step; the step itself for constant-step runs.
  double eta0 = 1.0;
  /// Backtracking decay, in (0, 1).
  double alpha = 0.5;
  std::size_t max_iters = 100;
  std::size_t max_backtracks_per_iter = 60;
  bool line_search_enabled = false;
  /// Early stop once F(x_k) - F* <= tolerance (needs a reference optimum).
  std::optional<double> tolerance;

  void validate() const;
};

struct IterationRecord {
  std::size_t k = 0;
  Vector x;
  double objective = 0.0;
  double eta_used = 0.0;
  std::size_t backtracks = 0;
  /// D_{h_k}(x_{k+1}, x_k) at the accepted step (0 for the initial record).
  double d_hk_value = 0.0;
  /// Wall-clock time since the start of the run; not part of any determinism guarantee.
  double elapsed_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  SolverConfig config;
  std::string problem_id;
  GeneratorKind generator_kind = GeneratorKind::squared_euclidean;
  /// Non-fatal events (step above gamma, acceptance at eta0 > gamma, ...).
  std::vector<std::string> notes;
};

/// Thrown when the backtracking budget runs out; carries the accepted prefix.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, IterationTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const IterationTrace& partial_trace() const { return partial_; }

 private:
  IterationTrace partial_;
};

/// One BPGA step: argmin g(x) + <x, grad f(x_k)> + (1/eta) D_H(x, x_k).
Vector step_bpga(const CompositeProblem& p, const BregmanGenerator& H, const ProxMap& pm,
                 const Vector& x_k, double eta);

/// One PGA step; pm must use the squared Euclidean generator.
Vector step_pga(const CompositeProblem& p, const ProxMap& pm, const Vector& x_k, double eta);

/// F(x) + D_h(x, x_k).
double gppa_objective(const CompositeProblem& p, const BregmanGenerator& h, const Vector& x,
                      const Vector& x_k);

/// g(x) + <x, grad f(x_k)> + (1/eta) D_H(x, x_k).
double bpga_objective(const CompositeProblem& p, const BregmanGenerator& H, const Vector& x,
                      const Vector& x_k, double eta);

/// Constant-step or backtracking BPGA. With line search, each outer iteration
/// shrinks eta_k by alpha until D_{h_k}(x_{k+1}, x_k) >= -kLineSearchSlack with
/// h_k = (1/eta_k) H - f, recomputing from the same x_k; the accepted step
/// carries over to the next iteration.
IterationTrace run_solver(const CompositeProblem& p, const BregmanGenerator& H, const ProxMap& pm,
                          const Vector& x0, const SolverConfig& cfg);

struct EquivalenceReport {
  /// max over steps and samples of gppa_objective(x_{k+1}) - gppa_objective(z).
  double worst_violation = 0.0;
  /// max over steps of the sample standard deviation of
  /// gppa_objective(x) - bpga_objective(x) across random feasible x.
  double worst_offset_spread = 0.0;
  std::size_t steps = 0;
};

/// Runs `iters` BPGA steps from x0 and checks each iterate against the GPPA
/// objective with h = (1/eta) H - f (hypothesis sigma >= eta/gamma checked).
EquivalenceReport verify_theorem2_equivalence(const CompositeProblem& p,
                                              const BregmanGenerator& H, const ProxMap& pm,
                                              const Vector& x0, double eta, std::size_t iters,
                                              std::uint64_t seed = 0,
                                              std::size_t perturbations = 1000,
                                              std::size_t offset_points = 100);

}  // namespace bregprox
