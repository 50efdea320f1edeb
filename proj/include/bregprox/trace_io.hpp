#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bregprox/experiments.hpp"

namespace bregprox {

inline constexpr const char* kTraceCsvHeader =
    "iter,objective,gap,eta,backtracks,d_hk,bound_classical,bound_gppa,elapsed_ms";
inline constexpr const char* kSummaryCsvHeader =
    "variant,iters_to_tol,final_gap,final_eta,certificate_margin,within_hypothesis,failed";

/// 17 significant digits, so the text round-trips the double exactly.
std::string format_real(double value);

/// One row per trace record. The bound columns are "inf" at iter 0. Unless
/// `include_timing` is set, elapsed_ms is written as 0 so that files are
/// byte-reproducible.
void write_trace_csv(std::ostream& out, const VariantResult& variant, double f_star,
                     bool include_timing);

/// iters_to_tol is -1 when the tolerance was never reached.
void write_summary_csv(std::ostream& out, const ExperimentResult& result);

/// Writes <dir>/<variant>.csv for every variant with a trace, plus
/// <dir>/summary.csv. Creates `dir` if needed. Throws IoError.
std::vector<std::filesystem::path> write_experiment(const std::filesystem::path& dir,
                                                    const ExperimentResult& result,
                                                    bool include_timing = false);

}  // namespace bregprox
