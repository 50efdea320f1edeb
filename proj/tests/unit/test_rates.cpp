#include <doctest.h>

#include <cmath>

#include "bregprox/errors.hpp"
#include "bregprox/experiments.hpp"
#include "bregprox/random.hpp"
#include "bregprox/rates.hpp"

using namespace bregprox;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

double kl(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += x[i] * std::log(x[i] / y[i]) - x[i] + y[i];
  return s;
}

}  // namespace

TEST_CASE("gppa_bound") {
  const auto H = squared_euclidean(2);
  CHECK(gppa_bound(H, vec({1, 0}), Vector::Zero(2), {}, 5) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(gppa_bound(H, vec({1, 2}), vec({1, 2}), {}, 3) == 0.0);
  // sigma_3 = 1 + 2 + 3.
  CHECK(gppa_bound(H, vec({1, 0}), Vector::Zero(2), {1, 2, 3}, 3) == doctest::Approx(0.5 / 6).epsilon(1e-15));
  CHECK_THROWS_AS(gppa_bound(H, vec({1, 0}), Vector::Zero(2), {}, 0), ContractViolation);
  CHECK_THROWS_AS(gppa_bound(H, vec({1, 0}), Vector::Zero(2), {1.0}, 2), ContractViolation);
}

TEST_CASE("bpga_bound") {
  CounterRng rng(1);
  SUBCASE("f = 0 reduces to gppa_bound with the scaled quadratic") {
    const Vector xs = rng.normal_vector(4), x0 = rng.normal_vector(4);
    CHECK(bpga_bound(squared_euclidean(4), SmoothFunction::zero(4), 1.0, xs, x0, 3) ==
          doctest::Approx(gppa_bound(squared_euclidean(4), xs, x0, {}, 3)).epsilon(1e-14));
  }
  SUBCASE("LASSO at eta = gamma is exactly zero") {
    for (int i = 0; i < 10; ++i) {
      const double gamma = rng.uniform(0.1, 3.0);
      const auto p = build_lasso_onestep(gamma, 2.0 * rng.normal_vector(6));
      CHECK(std::abs(bpga_bound(squared_euclidean(6), p.f, gamma, p.optimum->x, rng.normal_vector(6), 1)) <=
            1e-12);
    }
  }
  SUBCASE("random quadratic f at eta = gamma / 2 matches the hand expansion") {
    const Matrix A = rng.normal_matrix(7, 10);
    const Vector b = rng.normal_vector(7);
    const auto f = SmoothFunction::least_squares(A, b);
    const double eta = 0.5 * *f.gamma();
    const Vector xs = rng.normal_vector(10), x0 = rng.normal_vector(10);
    const Vector d = xs - x0;
    const double expected = (d.squaredNorm() / (2 * eta) - 0.5 * (A * d).squaredNorm()) / 10.0;
    CHECK(bpga_bound(squared_euclidean(10), f, eta, xs, x0, 10) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("step above gamma violates the hypothesis") {
    const auto f = SmoothFunction::scaled_squared_distance(Vector::Zero(2), 1.0);
    CHECK_THROWS_AS(bpga_bound(squared_euclidean(2), f, 2.0, vec({1, 0}), Vector::Zero(2), 1),
                    HypothesisViolation);
  }
}

TEST_CASE("classical_pga_bound") {
  CHECK(classical_pga_bound(1.0, vec({1, 0}), Vector::Zero(2), 1) == doctest::Approx(0.5));
  CHECK(classical_pga_bound(0.3, vec({1, 2}), vec({1, 2}), 4) == 0.0);
  CHECK_THROWS_AS(classical_pga_bound(0.0, vec({1, 0}), Vector::Zero(2), 1), ContractViolation);

  SUBCASE("strictly above bpga_bound on the LASSO instance") {
    CounterRng rng(2);
    for (int i = 0; i < 20; ++i) {
      const double gamma = rng.uniform(0.1, 3.0);
      const auto p = build_lasso_onestep(gamma, 2.0 * rng.normal_vector(5));
      const Vector x0 = rng.normal_vector(5);
      CHECK(classical_pga_bound(gamma, p.optimum->x, x0, 1) >
            bpga_bound(squared_euclidean(5), p.f, gamma, p.optimum->x, x0, 1));
    }
  }
}

TEST_CASE("line_search_bound") {
  CHECK(line_search_bound(squared_euclidean(2), 0.5, 1.0, 100.0, vec({1, 0}), Vector::Zero(2), 0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(line_search_bound(squared_euclidean(2), 0.5, 1.0, 100.0, vec({1, 0}), vec({1, 0}), 7) == 0.0);
  const Vector xs = vec({0.5, 0.5}), x0 = vec({0.25, 0.75});
  const double expected = kl(xs, x0) / 10.0;
  CHECK(expected == doctest::Approx(0.014384).epsilon(1e-4));
  CHECK(line_search_bound(negative_entropy(2), 0.5, 2.0, 100.0, xs, x0, 9) ==
        doctest::Approx(expected).epsilon(1e-13));
  // eta0 below alpha * gamma caps the guaranteed step at eta0.
  CHECK(line_search_bound(squared_euclidean(2), 0.5, 1.0, 0.25, vec({1, 0}), Vector::Zero(2), 0) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(line_search_bound(squared_euclidean(2), 1.0, 1.0, 1.0, xs, x0, 0), ContractViolation);
}

TEST_CASE("tightness ordering on random quadratic instances") {
  CounterRng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = SmoothFunction::least_squares(rng.normal_matrix(6, 8), rng.normal_vector(6));
    const double eta = rng.uniform(0.1, 1.0) * *f.gamma();
    const Vector xs = rng.normal_vector(8), x0 = rng.normal_vector(8);
    const double df = smooth_bregman_distance(f, xs, x0);
    for (std::size_t k = 1; k <= 50; ++k) {
      const double tight = bpga_bound(squared_euclidean(8), f, eta, xs, x0, k);
      const double loose = classical_pga_bound(eta, xs, x0, k);
      CHECK(tight <= loose + 1e-12);
      CHECK(loose - tight == doctest::Approx(df / k).epsilon(1e-9).scale(1.0));
      if (df > 1e-8) CHECK(tight < loose);
    }
  }
}

TEST_CASE("RateCertificate") {
  const RateCertificate cert(CertificateKind::gppa, std::nullopt, 3.0);
  CHECK(cert.bound_at(1) == 3.0);
  CHECK(cert.bound_at(4) == 0.75);
  for (std::size_t k = 1; k < 100; ++k) {
    CHECK(cert.bound_at(k + 1) <= cert.bound_at(k));
    CHECK(cert.bound_at(k) * static_cast<double>(k) == doctest::Approx(3.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cert.bound_at(0), ContractViolation);
  const RateCertificate scaled(CertificateKind::classical_pga, std::nullopt, 1.0, 0.5);
  CHECK(scaled.bound_at(2) == 1.0);
  const RateCertificate scheduled(CertificateKind::gppa, std::nullopt, 1.0, 1.0, {1.0, 3.0});
  CHECK(scheduled.bound_at(2) == 0.25);
}

TEST_CASE("certify_trace") {
  SUBCASE("LASSO one-step run") {
    CounterRng rng(4);
    const double gamma = 0.8;
    const auto p = build_lasso_onestep(gamma, 3.0 * rng.normal_vector(8));
    const auto H = squared_euclidean(8);
    const Vector x0 = rng.normal_vector(8);
    SolverConfig cfg;
    cfg.eta0 = gamma;
    cfg.max_iters = 5;
    const auto trace = run_solver(p, H, make_prox_map(p.g, H), x0, cfg);
    const auto cert = make_bpga_certificate(p, H, gamma, x0);
    CHECK(cert.kind() == CertificateKind::gppa_pga);
    CHECK(cert.within_hypothesis);
    CHECK(certify_trace(trace, cert) >= -1e-9);
    CHECK(trace.records[1].objective - p.optimum->value <= 1e-10);
  }
  SUBCASE("20-D simplex LS over 200 iterations") {
    ExperimentSpec spec;
    spec.rows = 10;
    spec.cols = 20;
    spec.seed = 5;
    auto inst = build_simplex_ls(spec);
    inst.problem.optimum = compute_simplex_reference(inst.problem, inst.gamma, 100000).optimum;
    const auto H = squared_euclidean(20);
    const Vector x0 = uniform_start(20);
    SolverConfig cfg;
    cfg.eta0 = inst.gamma;
    cfg.max_iters = 200;
    const auto trace = run_solver(inst.problem, H, make_prox_map(inst.problem.g, H), x0, cfg);
    CHECK(certify_trace(trace, make_bpga_certificate(inst.problem, H, inst.gamma, x0)) >= -1e-9);
    CHECK(certify_trace(trace, make_classical_certificate(inst.problem, H, inst.gamma, x0)) >= -1e-9);

    SUBCASE("violated hypothesis is flagged, not asserted") {
      const auto bad = make_bpga_certificate(inst.problem, H, 10.0 * inst.gamma, x0);
      CHECK_FALSE(bad.within_hypothesis);
    }
  }
  SUBCASE("missing optimum") {
    const auto p = CompositeProblem("no-opt", SmoothFunction::zero(2), NonsmoothTerm::l1(2),
                                    DomainDescriptor::real_space(2));
    CHECK_THROWS_AS(make_bpga_certificate(p, squared_euclidean(2), 1.0, Vector::Zero(2)), ConfigurationError);
    IterationTrace trace;
    CHECK_THROWS_AS(certify_trace(trace, RateCertificate(CertificateKind::gppa, std::nullopt, 1.0)),
                    ConfigurationError);
  }
}
