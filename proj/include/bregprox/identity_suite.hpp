#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bregprox {

struct SuiteResult {
  std::string name;
  /// Worst observed statistic; compared against `threshold` in the direction
  /// given by `lower_is_better`.
  double worst = 0.0;
  double threshold = 0.0;
  bool lower_is_better = true;
  std::size_t samples = 0;
  bool passed = false;
};

struct IdentitySuiteOptions {
  std::uint64_t seed = 0;
  /// Random samples per identity suite.
  std::size_t samples = 1000;
  int dimension = 5;
  /// Negative control: replace the squared Euclidean gradient by 2x.
  bool corrupt_gradient = false;
};

/// Randomized checks of Bregman nonnegativity, the three-point identity,
/// linearity (+ and -), the BPGA/GPPA constant-offset identity and prox
/// optimality. Relative residuals are residual / (1 + magnitude).
std::vector<SuiteResult> run_identity_suites(const IdentitySuiteOptions& options);

}  // namespace bregprox
