#include <algorithm>
#include <cmath>
#include <limits>

#include "tiertune/error.hpp"
#include "tiertune/perfdb.hpp"
#include "sqdist.hpp"

namespace tiertune::perfdb {

Match scan_serial(std::span<const Vec> keys, const Vec& query) noexcept {
  double best_d = std::numeric_limits<double>::infinity();
  std::size_t best_i = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double d = detail::sqdist(keys[i], query);
    if (d < best_d) {
      best_d = d;
      best_i = i;
    }
  }
  return Match{best_i, std::sqrt(best_d)};
}

Match scan_parallel(std::span<const Vec> keys, const Vec& query) noexcept {
  double best_d = std::numeric_limits<double>::infinity();
  std::size_t best_i = std::numeric_limits<std::size_t>::max();
  const auto n = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel
  {
    double local_d = std::numeric_limits<double>::infinity();
    std::size_t local_i = std::numeric_limits<std::size_t>::max();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double d = detail::sqdist(keys[i], query);
      if (d < local_d) {
        local_d = d;
        local_i = i;
      }
    }
#pragma omp critical(tiertune_scan)
    {
      if (local_d < best_d || (local_d == best_d && local_i < best_i)) {
        best_d = local_d;
        best_i = local_i;
      }
    }
  }
  return Match{best_i, std::sqrt(best_d)};
}

Database::Database(std::vector<ExecutionRecord> records) : records_(std::move(records)) {
  for (const auto& r : records_) {
    r.config.validate();
    r.validate();
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const ExecutionRecord& a, const ExecutionRecord& b) { return config_less(a.config, b.config); });
  norm_ = NormStats::compute(records_);
  keys_.reserve(records_.size());
  for (const auto& r : records_) keys_.push_back(norm_.normalize(r.config));
  index_ = KdIndex(keys_);
}

Match Database::nearest(const ConfigVector& probe, SearchMethod method) const {
  if (records_.empty()) throw Error(Errc::EmptyDatabase, "performance database is empty");
  const Vec q = norm_.normalize(probe);
  for (double x : q)
    if (!std::isfinite(x)) throw Error(Errc::InvalidParams, "probe components must be finite");
  switch (method) {
    case SearchMethod::ScanSerial: return scan_serial(keys_, q);
    case SearchMethod::ScanParallel: return scan_parallel(keys_, q);
    case SearchMethod::Index: break;
  }
  double d2 = 0.0;
  const std::size_t i = index_.nearest(q, &d2);
  return Match{i, std::sqrt(d2)};
}

const ExecutionRecord& Database::query_nearest(const ConfigVector& probe) const {
  return records_[nearest(probe).index];
}

}  // namespace tiertune::perfdb
