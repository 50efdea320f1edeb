#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bregprox/bregman.hpp"
#include "bregprox/function_core.hpp"
#include "bregprox/solvers.hpp"

namespace bregprox {

// Convergence-rate bounds. Every bound has the form
//
//   F(x_k) - F*  <=  d_at_x0 / (step_factor * sigma_k),   sigma_k = sum_{i<=k} lambda_i,
//
// with lambda_i = 1 unless a schedule is given. The kinds differ in d_at_x0:
//
//   gppa           D_h(x*, x0)                        arbitrary generator h
//   bpga           D_{(1/eta)H - f}(x*, x0)
//   gppa_pga       D_{(1/(2 eta))||.||^2 - f}(x*, x0)  bpga with quadratic H
//   classical_pga  ||x* - x0||^2 / 2,  step_factor = eta
//   line_search    D_H(x*, x0),        step_factor = min(eta0, alpha * gamma)

/// D_h(x*, x0) / sum_{k=1..m} lambda_k.
double gppa_bound(const BregmanGenerator& h, const Vector& x_star, const Vector& x0,
                  const std::vector<double>& lambda_schedule, std::size_t m);

/// D_{(1/eta)H - f}(x*, x0) / k via composite_generator (hypothesis checked).
double bpga_bound(const BregmanGenerator& H, const SmoothFunction& f, double eta,
                  const Vector& x_star, const Vector& x0, std::size_t k);

/// ||x* - x0||^2 / (2 eta k).
double classical_pga_bound(double eta, const Vector& x_star, const Vector& x0, std::size_t k);

/// D_H(x*, x0) / (eta_min (m + 1)), eta_min = min(eta0, alpha * gamma). Bounds
/// F(x_{m+1}) - F*.
double line_search_bound(const BregmanGenerator& H, double alpha, double gamma, double eta0,
                         const Vector& x_star, const Vector& x0, std::size_t m);

enum class CertificateKind { gppa, bpga, gppa_pga, classical_pga, line_search };

std::string to_string(CertificateKind kind);

class RateCertificate {
 public:
  RateCertificate(CertificateKind kind, std::optional<ReferenceOptimum> reference, double d_at_x0,
                  double step_factor = 1.0, std::vector<double> lambda_schedule = {});

  CertificateKind kind() const { return kind_; }
  const std::optional<ReferenceOptimum>& reference_optimum() const { return reference_; }
  double d_at_x0() const { return d_at_x0_; }
  double step_factor() const { return step_factor_; }

  /// Bound on F(x_k) - F* for k >= 1.
  double bound_at(std::size_t k) const;

  /// False when the certificate is evaluated outside the regime in which the
  /// underlying theorem applies (e.g. constant step eta > gamma).
  bool within_hypothesis = true;
  std::vector<std::string> caveats;

 private:
  CertificateKind kind_;
  std::optional<ReferenceOptimum> reference_;
  double d_at_x0_;
  double step_factor_;
  std::vector<double> lambda_prefix_;
};

/// Certificate for a constant-step BPGA run at step eta. Uses the unchecked
/// composite generator and marks the certificate out of hypothesis when
/// sigma < eta / gamma. Kind is gppa_pga for quadratic H, bpga otherwise.
/// Throws ConfigurationError if the problem has no reference optimum.
RateCertificate make_bpga_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                      double eta, const Vector& x0);

/// D_{(1/eta) H}(x*, x0) / k: the bound without the -D_f correction. For
/// quadratic H this is the classical PGA rate.
RateCertificate make_classical_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                           double eta, const Vector& x0);

RateCertificate make_line_search_certificate(const CompositeProblem& p, const BregmanGenerator& H,
                                             double alpha, double eta0, const Vector& x0);

/// min over k >= 1 of bound_at(k) - (F(x_k) - F*). Throws ConfigurationError
/// when the certificate has no reference optimum.
double certify_trace(const IterationTrace& trace, const RateCertificate& cert);

}  // namespace bregprox
