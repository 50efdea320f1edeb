#include "bregprox/trace_io.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "bregprox/errors.hpp"

namespace bregprox {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_trace_csv(std::ostream& out, const VariantResult& variant, double f_star,
                     bool include_timing) {
  out << kTraceCsvHeader << '\n';
  if (!variant.trace) return;
  for (const IterationRecord& rec : variant.trace->records) {
    const double classical =
        rec.k == 0 || !variant.classical ? kInfinity : variant.classical->bound_at(rec.k);
    const double gppa =
        rec.k == 0 || !variant.certificate ? kInfinity : variant.certificate->bound_at(rec.k);
    out << rec.k << ',' << format_real(rec.objective) << ',' << format_real(rec.objective - f_star)
        << ',' << format_real(rec.eta_used) << ',' << rec.backtracks << ','
        << format_real(rec.d_hk_value) << ',' << format_real(classical) << ',' << format_real(gppa)
        << ',' << format_real(include_timing ? rec.elapsed_ms : 0.0) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << kSummaryCsvHeader << '\n';
  const double f_star = result.reference.optimum.value;
  for (const VariantResult& v : result.variants) {
    const long long iters = v.iters_to_tol ? static_cast<long long>(*v.iters_to_tol) : -1;
    const bool has_records = v.trace && !v.trace->records.empty();
    const double final_gap = has_records ? v.trace->records.back().objective - f_star : kInfinity;
    const double final_eta = has_records ? v.trace->records.back().eta_used : 0.0;
    const bool within = v.certificate && v.certificate->within_hypothesis;
    out << v.variant.name() << ',' << iters << ',' << format_real(final_gap) << ','
        << format_real(final_eta) << ',' << format_real(v.certificate_margin) << ','
        << (within ? 1 : 0) << ',' << (v.failure ? 1 : 0) << '\n';
  }
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::vector<std::filesystem::path> write_experiment(const std::filesystem::path& dir,
                                                    const ExperimentResult& result,
                                                    bool include_timing) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  std::vector<std::filesystem::path> written;
  for (const VariantResult& v : result.variants) {
    if (!v.trace) continue;
    const auto path = dir / (v.variant.name() + ".csv");
    auto out = open_for_write(path);
    write_trace_csv(out, v, result.reference.optimum.value, include_timing);
    finish(out, path);
    written.push_back(path);
  }
  const auto summary = dir / "summary.csv";
  auto out = open_for_write(summary);
  write_summary_csv(out, result);
  finish(out, summary);
  written.push_back(summary);
  return written;
}

}  // namespace bregprox
