#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/perfdb.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tiertune::perfdb {

namespace {

std::vector<double> checked_fractions(const std::vector<double>& in) {
  std::vector<double> f = in;
  std::sort(f.begin(), f.end(), std::greater<>());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  if (f.empty() || f.front() != 1.0)
    throw Error(Errc::InvalidParams, "fm fractions must include 1.0");
  if (!(f.back() > 0.0)) throw Error(Errc::InvalidParams, "fm fractions must be > 0");
  return f;
}

struct Outcome {
  std::optional<ExecutionRecord> record;
  std::string reason;
  std::exception_ptr fatal;  // anything that is not a domain error
};

Outcome measure_one(const ConfigVector& config, const BuildOptions& options) {
  try {
    return Outcome{measure_record(config, options), {}, nullptr};
  } catch (const Error& e) {
    return Outcome{std::nullopt, e.what(), nullptr};
  } catch (...) {
    return Outcome{std::nullopt, {}, std::current_exception()};
  }
}

BuildResult assemble(std::span<const ConfigVector> grid, std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes)
    if (o.fatal) std::rethrow_exception(o.fatal);
  BuildResult result;
  std::vector<ExecutionRecord> records;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (outcomes[i].record)
      records.push_back(std::move(*outcomes[i].record));
    else
      result.skipped.push_back(SkippedConfig{grid[i], outcomes[i].reason});
  }
  result.db = Database(std::move(records));
  return result;
}

}  // namespace

ExecutionRecord measure_record(const ConfigVector& config, const BuildOptions& options) {
  const std::vector<double> fractions = checked_fractions(options.fm_fractions);
  const workgen::WorkloadSpec spec = workgen::synthesize(to_target(config), options.mode);
  const auto results = workgen::execute_fractions(spec, options.params, fractions);
  ExecutionRecord rec;
  rec.config = config;
  rec.meta = RecordMeta{options.seed, params_hash(options.params)};
  rec.samples.reserve(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i)
    rec.samples.push_back(Sample{fractions[i], results[i].exec_time});
  return rec;
}

BuildResult build_serial(std::span<const ConfigVector> grid, const BuildOptions& options) {
  checked_fractions(options.fm_fractions);
  std::vector<Outcome> outcomes;
  outcomes.reserve(grid.size());
  for (const auto& c : grid) outcomes.push_back(measure_one(c, options));
  return assemble(grid, outcomes);
}

BuildResult build(std::span<const ConfigVector> grid, const BuildOptions& options) {
  checked_fractions(options.fm_fractions);
  std::vector<Outcome> outcomes(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#ifdef _OPENMP
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    outcomes[k] = measure_one(grid[k], options);
  }
  return assemble(grid, outcomes);
}

}  // namespace tiertune::perfdb
