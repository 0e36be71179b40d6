#pragma once

// Performance database: execution records keyed by 9-element configuration
// vectors, exact nearest-record lookup over z-normalised keys, and a
// line-oriented on-disk format.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tiertune/tiersim.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::perfdb {

inline constexpr std::size_t kDims = 9;
inline constexpr int kFormatVersion = 1;

using Vec = std::array<double, kDims>;

/// Field order is the key order: pm_de, pm_pr, ai, pacc_fast, pacc_slow,
/// prof_int, hot_thr, free_page_thr, num_threads.
struct ConfigVector {
  double pm_de = 0.0;
  double pm_pr = 0.0;
  double ai = 0.0;
  double pacc_fast = 0.0;
  double pacc_slow = 0.0;
  double prof_int = 1.0;
  double hot_thr = 2.0;
  double free_page_thr = 0.0;
  double num_threads = 1.0;

  Vec to_array() const noexcept;
  static ConfigVector from_array(const Vec& v) noexcept;

  /// Throws InvalidParams on non-finite or negative components, hot_thr < 2
  /// or num_threads < 1.
  void validate() const;

  bool operator==(const ConfigVector&) const = default;
};

/// Lexicographic order over the raw components.
bool config_less(const ConfigVector& a, const ConfigVector& b) noexcept;

ConfigVector from_target(const workgen::WorkloadTarget& target) noexcept;
/// Count components must be integral; otherwise InfeasibleTarget.
workgen::WorkloadTarget to_target(const ConfigVector& config);

struct Sample {
  double fm_fraction = 1.0;
  double exec_time = 0.0;

  bool operator==(const Sample&) const = default;
};

struct RecordMeta {
  std::uint64_t seed = 0;
  std::uint64_t params_hash = 0;

  bool operator==(const RecordMeta&) const = default;
};

struct ExecutionRecord {
  ConfigVector config;
  std::vector<Sample> samples;  // strictly descending fm_fraction, includes 1.0
  RecordMeta meta;

  /// Throws MalformedRecord when the sample invariants do not hold.
  void validate() const;

  bool operator==(const ExecutionRecord&) const = default;
};

struct NormStats {
  Vec mean{};
  Vec stddev{};  // population std; constant dimensions get 1

  static NormStats identity() noexcept;
  static NormStats compute(std::span<const ExecutionRecord> records) noexcept;
  Vec normalize(const ConfigVector& config) const noexcept;

  bool operator==(const NormStats&) const = default;
};

/// Exact k-d tree over normalised keys.  Returns the same (distance, index)
/// as a linear scan, including the lowest-index tie-break.
class KdIndex {
 public:
  KdIndex() = default;
  explicit KdIndex(std::span<const Vec> points);

  std::size_t nearest(const Vec& query, double* sq_distance = nullptr) const;
  bool empty() const noexcept { return points_.empty(); }

 private:
  struct Node {
    std::uint32_t begin, end;  // range in order_
    std::int32_t left = -1, right = -1;
    std::uint8_t dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec& q, double& best_d, std::size_t& best_i) const;

  std::vector<Vec> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

enum class SearchMethod { Index, ScanSerial, ScanParallel };

struct Match {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean, normalised space
};

class Database {
 public:
  Database() = default;
  /// Sorts records by raw config and derives the normalisation statistics.
  explicit Database(std::vector<ExecutionRecord> records);

  const std::vector<ExecutionRecord>& records() const noexcept { return records_; }
  const NormStats& norm() const noexcept { return norm_; }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t size() const noexcept { return records_.size(); }

  /// Nearest record under z-normalised Euclidean distance; ties go to the
  /// lexicographically smallest raw config.  Throws EmptyDatabase.
  Match nearest(const ConfigVector& probe, SearchMethod method = SearchMethod::Index) const;
  const ExecutionRecord& query_nearest(const ConfigVector& probe) const;

  bool operator==(const Database& other) const {
    return records_ == other.records_ && norm_ == other.norm_;
  }

 private:
  std::vector<ExecutionRecord> records_;
  NormStats norm_ = NormStats::identity();
  std::vector<Vec> keys_;
  KdIndex index_;
};

/// Serial reference scan; exposed for tests and the benchmark.
Match scan_serial(std::span<const Vec> keys, const Vec& query) noexcept;
/// OpenMP scan; identical result to scan_serial.
Match scan_parallel(std::span<const Vec> keys, const Vec& query) noexcept;

struct BuildOptions {
  std::vector<double> fm_fractions;  // must include 1.0
  sim::TierParams params;
  std::uint64_t seed = 0;
  workgen::ShrinkMode mode = workgen::ShrinkMode::Guaranteed;
  int threads = 0;  // 0 = OpenMP default
};

struct SkippedConfig {
  ConfigVector config;
  std::string reason;
};

struct BuildResult {
  Database db;
  std::vector<SkippedConfig> skipped;
};

/// 100 evenly spaced fractions in [0.5, 1.0].
std::vector<double> default_fm_fractions();

std::uint64_t params_hash(const sim::TierParams& params);

/// Synthesises and executes the micro-benchmark for one config at every
/// fraction.  Throws on infeasible configs.
ExecutionRecord measure_record(const ConfigVector& config, const BuildOptions& options);

/// Fans out across configs with OpenMP.  Deterministic: same output as
/// build_serial for any thread count.
BuildResult build(std::span<const ConfigVector> grid, const BuildOptions& options);
BuildResult build_serial(std::span<const ConfigVector> grid, const BuildOptions& options);

struct LossPoint {
  double fm_fraction = 1.0;
  double pd = 0.0;

  bool operator==(const LossPoint&) const = default;
};

/// pd'(f) = (y'(f) - x') / x' with x' the 1.0 sample.  Throws MalformedRecord.
std::vector<LossPoint> loss_curve(const ExecutionRecord& record);

void write_database(std::ostream& out, const Database& db);
Database read_database(std::istream& in);
void save(const Database& db, const std::filesystem::path& path);
Database load(const std::filesystem::path& path);

}  // namespace tiertune::perfdb
