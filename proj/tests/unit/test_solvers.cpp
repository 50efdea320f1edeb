#include <doctest.h>

#include <cmath>

#include "bregprox/errors.hpp"
#include "bregprox/experiments.hpp"
#include "bregprox/random.hpp"
#include "bregprox/solvers.hpp"

using namespace bregprox;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

CompositeProblem l1_only(Index n) {
  return CompositeProblem("ppa-l1", SmoothFunction::zero(n), NonsmoothTerm::l1(n),
                          DomainDescriptor::real_space(n));
}

CompositeProblem random_lasso(CounterRng& rng, Index m, Index n) {
  return CompositeProblem("lasso", SmoothFunction::least_squares(rng.normal_matrix(m, n), rng.normal_vector(m)),
                          NonsmoothTerm::l1(n), DomainDescriptor::real_space(n));
}

SimplexLsInstance small_simplex(Index rows, Index cols, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.seed = seed;
  return build_simplex_ls(spec);
}

}  // namespace

TEST_CASE("SolverConfig validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.alpha = 0.5;
  cfg.eta0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.eta0 = 1.0;
  cfg.max_backtracks_per_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}

TEST_CASE("step_bpga examples") {
  const auto H = squared_euclidean(2);
  SUBCASE("f = 0 reduces to the l1 prox") {
    const auto p = l1_only(2);
    const Vector x = step_bpga(p, H, make_prox_map(p.g, H), vec({3, -0.5}), 1.0);
    CHECK((x - vec({2, 0})).norm() <= 1e-15);
  }
  SUBCASE("LASSO at eta = gamma lands on the optimum from any start") {
    CounterRng rng(1);
    const double gamma = 0.7;
    const auto p = build_lasso_onestep(gamma, 2.0 * rng.normal_vector(2));
    const auto pm = make_prox_map(p.g, H);
    for (int i = 0; i < 20; ++i) {
      const Vector x = step_bpga(p, H, pm, 5.0 * rng.normal_vector(2), gamma);
      CHECK((x - p.optimum->x).norm() <= 1e-12);
    }
  }
  SUBCASE("fixed point") {
    const auto p = l1_only(2);
    const Vector x = step_bpga(p, H, make_prox_map(p.g, H), Vector::Zero(2), 0.3);
    CHECK(x.norm() == 0.0);
  }
  SUBCASE("mismatched prox map and non-interior start") {
    const auto p = l1_only(2);
    const auto other = make_prox_map(NonsmoothTerm::zero(2), H);
    CHECK_THROWS_AS(step_bpga(p, H, other, Vector::Zero(2), 1.0), ContractViolation);
    const auto inst = small_simplex(3, 3, 1);
    const auto E = negative_entropy(3);
    CHECK_THROWS_AS(step_bpga(inst.problem, E, make_prox_map(inst.problem.g, E), vec({1, 0, 0}), 0.1),
                    DomainError);
  }
}

TEST_CASE("step_pga agrees with step_bpga and with a direct projection") {
  CounterRng rng(2);
  const auto H = squared_euclidean(8);
  const auto lasso = random_lasso(rng, 5, 8);
  const auto inst = small_simplex(6, 8, 3);
  for (const CompositeProblem* p : {&lasso, &inst.problem}) {
    const auto pm = make_prox_map(p->g, H);
    for (int i = 0; i < 50; ++i) {
      const Vector x = p->g.kind() == NonsmoothKind::l1 ? rng.normal_vector(8) : rng.simplex_point(8);
      const double eta = rng.uniform(0.01, 2.0);
      CHECK((step_pga(*p, pm, x, eta) - step_bpga(*p, H, pm, x, eta)).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  const auto pm = make_prox_map(inst.problem.g, H);
  const Vector x = rng.simplex_point(8);
  const Vector direct = project_simplex(inst.problem.f.gradient(x), x, 0.4);
  CHECK((step_pga(inst.problem, pm, x, 0.4) - direct).norm() <= 1e-15);

  const auto E = negative_entropy(8);
  CHECK_THROWS_AS(step_pga(inst.problem, make_prox_map(inst.problem.g, E), x, 0.4), ContractViolation);
}

TEST_CASE("gppa_objective") {
  CounterRng rng(4);
  const auto p = random_lasso(rng, 4, 6);
  const auto H = squared_euclidean(6);
  const double eta = 0.5 * *p.f.gamma();
  const auto h = composite_generator(H, p.f, eta);

  SUBCASE("distance term vanishes at the anchor") {
    const Vector xk = rng.normal_vector(6);
    CHECK(gppa_objective(p, h, xk, xk) == doctest::Approx(evaluate_composite(p, xk)).epsilon(1e-14));
  }
  SUBCASE("differs from the BPGA objective by a constant in x") {
    const Vector xk = rng.normal_vector(6);
    // Hand-expanded constant: f(x_k) - <x_k, grad f(x_k)>.
    const double expected = p.f.value(xk) - xk.dot(p.f.gradient(xk));
    for (int i = 0; i < 100; ++i) {
      const Vector x = 3.0 * rng.normal_vector(6);
      const double offset = gppa_objective(p, h, x, xk) - bpga_objective(p, H, x, xk, eta);
      CHECK(offset == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    }
  }
  SUBCASE("f = 0 gives g + D_H / eta") {
    const auto q = l1_only(6);
    const auto h0 = composite_generator(H, q.f, 2.0);
    for (int i = 0; i < 20; ++i) {
      const Vector x = rng.normal_vector(6), xk = rng.normal_vector(6);
      CHECK(gppa_objective(q, h0, x, xk) ==
            doctest::Approx(x.lpNorm<1>() + 0.5 * (x - xk).squaredNorm() / 2.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("run_solver: LASSO converges in one step") {
  CounterRng rng(5);
  const double gamma = 1.3;
  const auto p = build_lasso_onestep(gamma, 3.0 * rng.normal_vector(10));
  const auto H = squared_euclidean(10);
  SolverConfig cfg;
  cfg.eta0 = gamma;
  cfg.max_iters = 3;
  const auto trace = run_solver(p, H, make_prox_map(p.g, H), 4.0 * rng.normal_vector(10), cfg);
  REQUIRE(trace.records.size() == 4);
  CHECK(trace.records[0].k == 0);
  CHECK(trace.records[1].objective - p.optimum->value <= 1e-10);
  CHECK(std::abs(trace.records[1].d_hk_value) <= 1e-12);
  CHECK(trace.problem_id == p.id);
}

TEST_CASE("run_solver: PPA on the l1 norm shrinks toward the origin") {
  const auto p = l1_only(3);
  const auto H = squared_euclidean(3);
  SolverConfig cfg;
  cfg.eta0 = 0.25;
  cfg.max_iters = 40;
  const auto trace = run_solver(p, H, make_prox_map(p.g, H), vec({2, -1.5, 0.3}), cfg);
  for (std::size_t k = 1; k < trace.records.size(); ++k)
    CHECK(trace.records[k].x.lpNorm<1>() <= trace.records[k - 1].x.lpNorm<1>());
  CHECK(trace.records.back().x.norm() == 0.0);
}

TEST_CASE("run_solver: line search invariants for both generators") {
  const auto inst = small_simplex(10, 20, 6);
  const auto x0 = uniform_start(20);
  for (const auto& H : {squared_euclidean(20), negative_entropy(20)}) {
    SolverConfig cfg;
    cfg.eta0 = 100.0;
    cfg.alpha = 0.5;
    cfg.max_iters = 150;
    cfg.line_search_enabled = true;
    const auto trace = run_solver(inst.problem, H, make_prox_map(inst.problem.g, H), x0, cfg);
    REQUIRE(trace.records.size() == 151);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      const auto& r = trace.records[k];
      CHECK(r.k == k);
      CHECK(r.d_hk_value >= -kLineSearchSlack);
      CHECK(r.eta_used >= 0.5 * inst.gamma - 1e-12);
      CHECK(r.eta_used <= trace.records[k - 1].eta_used);
      CHECK(r.objective <= trace.records[k - 1].objective + 1e-15);
      CHECK(inst.problem.domain.member(r.x));
    }
    CHECK(trace.records[1].backtracks > 0);
  }
}

TEST_CASE("run_solver: constant step above gamma is advisory") {
  const auto inst = small_simplex(8, 10, 7);
  const auto H = squared_euclidean(10);
  SolverConfig cfg;
  cfg.eta0 = 10.0 * inst.gamma;
  cfg.max_iters = 5;
  const auto trace = run_solver(inst.problem, H, make_prox_map(inst.problem.g, H), uniform_start(10), cfg);
  CHECK(trace.records.size() == 6);
  CHECK_FALSE(trace.notes.empty());
}

TEST_CASE("run_solver: exhausted backtracking budget raises SolverFailure") {
  const auto inst = small_simplex(8, 10, 8);
  const auto H = squared_euclidean(10);
  SolverConfig cfg;
  cfg.eta0 = 1e6;
  cfg.alpha = 0.9;
  cfg.max_backtracks_per_iter = 2;
  cfg.line_search_enabled = true;
  try {
    run_solver(inst.problem, H, make_prox_map(inst.problem.g, H), uniform_start(10), cfg);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.partial_trace().records.size() == 1);
  }
}

TEST_CASE("run_solver: early stop at tolerance") {
  const auto p = build_lasso_onestep(1.0, vec({3, -0.5}));
  const auto H = squared_euclidean(2);
  SolverConfig cfg;
  cfg.eta0 = 1.0;
  cfg.max_iters = 100;
  cfg.tolerance = 1e-9;
  const auto trace = run_solver(p, H, make_prox_map(p.g, H), vec({-4, 4}), cfg);
  CHECK(trace.records.size() == 2);
}

TEST_CASE("BPGA iterates minimize the GPPA objective") {
  SUBCASE("quadratic H, l1 g, 20-D LASSO") {
    CounterRng rng(9);
    const auto p = random_lasso(rng, 15, 20);
    const auto H = squared_euclidean(20);
    const auto report = verify_theorem2_equivalence(p, H, make_prox_map(p.g, H), rng.normal_vector(20),
                                                    *p.f.gamma(), 10, 11);
    CHECK(report.steps == 10);
    CHECK(report.worst_violation <= 1e-9);
    CHECK(report.worst_offset_spread <= 1e-10);
  }
  SUBCASE("entropy H, simplex g, 10-D simplex LS") {
    const auto inst = small_simplex(8, 10, 12);
    const auto E = negative_entropy(10);
    const auto report = verify_theorem2_equivalence(inst.problem, E, make_prox_map(inst.problem.g, E),
                                                    uniform_start(10), inst.gamma, 10, 13);
    CHECK(report.worst_violation <= 1e-9);
    CHECK(report.worst_offset_spread <= 1e-10);
  }
  SUBCASE("f = 0") {
    const auto p = l1_only(5);
    const auto H = squared_euclidean(5);
    CounterRng rng(14);
    const auto report =
        verify_theorem2_equivalence(p, H, make_prox_map(p.g, H), rng.normal_vector(5), 1.0, 10, 15);
    CHECK(report.worst_violation <= 1e-12);
    CHECK(report.worst_offset_spread <= 1e-14);
  }
  SUBCASE("step above gamma violates the hypothesis") {
    CounterRng rng(16);
    const auto p = random_lasso(rng, 4, 5);
    const auto H = squared_euclidean(5);
    CHECK_THROWS_AS(verify_theorem2_equivalence(p, H, make_prox_map(p.g, H), rng.normal_vector(5),
                                                2.0 * *p.f.gamma(), 3),
                    HypothesisViolation);
  }
}
