#include "bregprox/rates.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bregprox/errors.hpp"

namespace bregprox {

namespace {

const ReferenceOptimum& require_optimum(const CompositeProblem& p) {
  if (!p.optimum)
    throw ConfigurationError(fmt::format("problem '{}' has no reference optimum", p.id));
  return *p.optimum;
}

double line_search_step_floor(double alpha, double gamma, double eta0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("line_search_bound: alpha must lie in (0, 1)");
  if (!(gamma > 0.0)) throw ContractViolation("line_search_bound: gamma must be positive");
  if (!(eta0 > 0.0)) throw ContractViolation("line_search_bound: eta0 must be positive");
  return std::min(eta0, alpha * gamma);
}

}  // namespace

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::gppa: return "gppa";
    case CertificateKind::bpga: return "bpga";
    case CertificateKind::gppa_pga: return "gppa_pga";
    case CertificateKind::classical_pga: return "classical_pga";
    case CertificateKind::line_search: return "line_search";
  }
  return "unknown";
}

double gppa_bound(const BregmanGenerator& h, const Vector& x_star, const Vector& x0,
                  const std::vector<double>& lambda_schedule, std::size_t m) {
  if (m < 1) throw ContractViolation("gppa_bound: m must be >= 1");
  // An empty schedule means lambda_k = 1, so sigma_m = m.
  if (lambda_schedule.empty()) return bregman_distance(h, x_star, x0) / static_cast<double>(m);
  if (m > lambda_schedule.size())
    throw ContractViolation(fmt::format("gppa_bound: m = {} outside schedule of length {}", m,
                                        lambda_schedule.size()));
  double sigma = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (!(lambda_schedule[k] > 0.0)) throw ContractViolation("gppa_bound: lambda_k must be positive");
    sigma += lambda_schedule[k];
  }
  return bregman_distance(h, x_star, x0) / sigma;
}

double bpga_bound(const BregmanGenerator& H, const SmoothFunction& f, double eta,
                  const Vector& x_star, const Vector& x0, std::size_t k) {
  if (k < 1) throw ContractViolation("bpga_bound: k must be >= 1");
  const BregmanGenerator h = composite_generator(H, f, eta);
  return bregman_distance(h, x_star, x0) / static_cast<double>(k);
}

double classical_pga_bound(double eta, const Vector& x_star, const Vector& x0, std::size_t k) {
  if (k < 1) throw ContractViolation("classical_pga_bound: k must be >= 1");
  if (!(eta > 0.0)) throw ContractViolation("classical_pga_bound: eta must be positive");
  return (x_star - x0).squaredNorm() / (2.0 * eta * static_cast<double>(k));
}

double line_search_bound(const BregmanGenerator& H, double alpha, double gamma, double eta0,
                         const Vector& x_star, const Vector& x0, std::size_t m) {
  const double eta_min = line_search_step_floor(alpha, gamma, eta0);
  return bregman_distance(H, x_star, x0) / (eta_min * static_cast<double>(m + 1));
}

RateCertificate::RateCertificate(CertificateKind kind, std::optional<ReferenceOptimum> reference,
                                 double d_at_x0, double step_factor,
                                 std::vector<double> lambda_schedule)
    : kind_(kind), reference_(std::move(reference)), d_at_x0_(d_at_x0), step_factor_(step_factor) {
  if (!(step_factor_ > 0.0)) throw ContractViolation("RateCertificate: step factor must be positive");
  double running = 0.0;
  lambda_prefix_.reserve(lambda_schedule.size());
  for (double lambda : lambda_schedule) {
    if (!(lambda > 0.0)) throw ContractViolation("RateCertificate: lambda_k must be positive");
    running += lambda;
    lambda_prefix_.push_back(running);
  }
}

double RateCertificate::bound_at(std::size_t k) const {
  if (k < 1) throw ContractViolation("RateCertificate::bound_at: k must be >= 1");
  double sigma = static_cast<double>(k);
  if (!lambda_prefix_.empty()) {
    if (k > lambda_prefix_.size())
      throw ContractViolation("RateCertificate::bound_at: k beyond the lambda schedule");
    sigma = lambda_prefix_[k - 1];
  }
  return d_at_x0_ / (step_factor_ * sigma);
}

RateCertificate make_bpga_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                      double eta, const Vector& x0) {
  const ReferenceOptimum& ref = require_optimum(p);
  const BregmanGenerator h = composite_generator_unchecked(H, p.f, eta);
  const CertificateKind kind = H.kind() == GeneratorKind::squared_euclidean
                                   ? CertificateKind::gppa_pga
                                   : CertificateKind::bpga;
  RateCertificate cert(kind, ref, bregman_distance(h, ref.x, x0));
  const auto lipschitz = p.f.lipschitz_grad();
  if (!lipschitz || H.strong_convexity() < eta * *lipschitz * (1.0 - 1e-12)) {
    cert.within_hypothesis = false;
    cert.caveats.push_back(fmt::format("sigma = {} < eta / gamma (eta = {})", H.strong_convexity(), eta));
  }
  if (H.strong_convexity_norm() == ConvexityNorm::l1_on_simplex)
    cert.caveats.push_back("H is strongly convex in l1 on the simplex; l2 modulus inferred");
  return cert;
}

RateCertificate make_classical_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                           double eta, const Vector& x0) {
  const ReferenceOptimum& ref = require_optimum(p);
  RateCertificate cert(CertificateKind::classical_pga, ref, bregman_distance(H, ref.x, x0), eta);
  const auto lipschitz = p.f.lipschitz_grad();
  if (!lipschitz || H.strong_convexity() < eta * *lipschitz * (1.0 - 1e-12))
    cert.within_hypothesis = false;
  return cert;
}

RateCertificate make_line_search_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                             double alpha, double eta0, const Vector& x0) {
  const ReferenceOptimum& ref = require_optimum(p);
  const auto gamma = p.f.gamma();
  if (!gamma) throw ConfigurationError("line-search certificate needs the Lipschitz constant of grad f");
  const double eta_min = line_search_step_floor(alpha, *gamma, eta0);
  RateCertificate cert(CertificateKind::line_search, ref, bregman_distance(H, ref.x, x0), eta_min);
  if (eta0 < *gamma)
    cert.caveats.push_back(fmt::format(
        "eta0 = {} < gamma = {}: bound uses min(eta0, alpha gamma) = {}", eta0, *gamma, eta_min));
  return cert;
}

double certify_trace(const IterationTrace& trace, const RateCertificate& cert) {
  if (!cert.reference_optimum())
    throw ConfigurationError("certify_trace: certificate has no reference optimum");
  const double f_star = cert.reference_optimum()->value;
  double worst = kInfinity;
  for (const IterationRecord& rec : trace.records) {
    if (rec.k == 0) continue;
    worst = std::min(worst, cert.bound_at(rec.k) - (rec.objective - f_star));
  }
  return worst;
}

}  // namespace bregprox
