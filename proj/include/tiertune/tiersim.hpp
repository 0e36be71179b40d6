#pragma once

// Two-tier memory simulator: a hot-threshold promotion path, watermark-driven
// background demotion, blocking direct reclaim and an additive cost model.
//
// Watermarks are stored as bounds on fast-tier *usage* (pages resident in the
// fast tier) rather than on free memory.  At a fixed capacity the two views
// are equivalent; usage bounds let a target fast-memory size be installed
// verbatim.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace tiertune::sim {

using PageId = std::uint64_t;

enum class Tier : std::uint8_t { Fast, Slow };

const char* to_string(Tier tier) noexcept;

struct TierParams {
  std::uint64_t fast_capacity = 1;
  std::uint64_t slow_capacity = 1;
  double lat_fast = 1.0;                 // time-units per fast access
  double lat_slow = 3.0;                 // time-units per slow access
  double mig_cost = 8.0;                 // time-units per migrated page
  double contention_beta = 0.5;          // bandwidth contention from migration
  double direct_reclaim_penalty = 50.0;  // time-units per blocking reclaim
  double ops_rate = 100.0;               // arithmetic ops per time-unit

  /// Throws Error{InvalidParams} when a field is out of range.
  void validate() const;

  bool operator==(const TierParams&) const = default;
};

struct Watermarks {
  std::uint64_t min_wm = 0;
  std::uint64_t low_wm = 0;
  std::uint64_t high_wm = 0;

  bool operator==(const Watermarks&) const = default;
};

/// {round(0.8 * new_fm), new_fm, new_fm}.  Rounds half up, in integers.
Watermarks watermarks_for_target(std::uint64_t new_fm) noexcept;

struct PageState {
  PageId id = 0;
  Tier tier = Tier::Slow;
  std::uint64_t interval_access_count = 0;
  std::uint64_t lifetime_access_count = 0;
};

struct Counters {
  std::uint64_t pacc_fast = 0;
  std::uint64_t pacc_slow = 0;
  std::uint64_t pm_pr = 0;
  std::uint64_t pm_de = 0;
  std::uint64_t mig_failures = 0;
  std::uint64_t direct_reclaims = 0;
  std::uint64_t ops_executed = 0;
  double sim_time = 0.0;

  bool operator==(const Counters&) const = default;
};

/// Interval-scoped counter snapshot emitted by `interval_tick`.
struct IntervalReport {
  std::uint64_t interval_index = 0;
  std::uint64_t fm_target = 0;
  std::uint64_t pacc_fast = 0;
  std::uint64_t pacc_slow = 0;
  std::uint64_t pm_de = 0;
  std::uint64_t pm_pr = 0;
  std::uint64_t mig_failures = 0;
  std::uint64_t direct_reclaims = 0;
  std::uint64_t ops_executed = 0;
  double sim_time = 0.0;
  double exec_time = 0.0;

  std::uint64_t accesses() const noexcept { return pacc_fast + pacc_slow; }
  std::uint64_t migrations() const noexcept { return pm_pr + pm_de; }

  bool operator==(const IntervalReport&) const = default;
};

struct StateConfig {
  std::uint64_t hot_thr = 2;        // >= 2
  double prof_int = 1.0;            // nominal profiling interval, time-units
  std::uint64_t free_page_thr = 0;  // default watermarks sit this far below capacity
  std::uint64_t rng_seed = 0;
  std::uint64_t num_threads = 1;    // metadata for counter sampling
  // Background reclaim demotes down to high_wm - reclaim_band.  Zero keeps
  // the collapsed band (low == high) installed by set_fast_mem_target.
  std::uint64_t reclaim_band = 0;
  // Keep per-page access counts across interval boundaries (multi-interval
  // hotness).  Off by default: counts reset at every tick.
  bool persist_access_counts = false;
};

class TieredMemState {
 public:
  TieredMemState(const TierParams& params, const StateConfig& config);

  /// First-touch allocation.  A fast allocation beyond the direct-reclaim
  /// bound blocks on `direct_reclaim`; if the fast tier still has no room the
  /// page spills to the slow tier.  Throws CapacityExceeded when the slow tier
  /// is full.
  PageId add_page(Tier preferred);

  /// Charges one access plus `ai_ops` of compute and returns the time
  /// charged.  A slow page whose interval count reaches hot_thr is queued for
  /// promotion.  Throws UnknownPage.
  double access_page(PageId page, std::uint64_t ai_ops);

  /// Promotes queued pages while fast usage is below low_wm (and capacity);
  /// the rest count as migration failures and stay in the slow tier.
  std::uint64_t run_promotion_queue();

  /// No-op unless fast_used > low_wm; otherwise demotes the coldest fast
  /// pages (interval count, then page id) until fast_used <= high_wm.
  std::uint64_t background_reclaim();

  /// Blocking reclaim that makes room for `incoming` pages under the
  /// direct-reclaim bound.  Returns the time charged to the application.
  double direct_reclaim(std::uint64_t incoming = 0);

  /// Installs watermarks_for_target(new_fm).  Does not reclaim by itself.
  /// Throws InvalidTarget unless 1 <= new_fm <= fast_capacity.
  Watermarks set_fast_mem_target(std::uint64_t new_fm);

  /// Installs arbitrary watermarks (min <= low <= high <= fast_capacity).
  void set_watermarks(const Watermarks& wm);

  /// Watermarks a fresh state starts with: capacity - free_page_thr.
  Watermarks default_watermarks() const noexcept;

  /// Fast usage above which a fast allocation must reclaim synchronously:
  /// min(capacity, 2 * low_wm - min_wm), i.e. min sits as far beyond low as
  /// low sits beyond min in free-memory terms.
  std::uint64_t direct_reclaim_bound() const noexcept;

  /// Snapshot and reset the interval-scoped counters and page counts.
  IntervalReport interval_tick();

  /// Same reset as interval_tick without emitting a report or advancing the
  /// interval index.  Used to drop warm-up phases.
  void reset_interval();

  /// Drops every page and the promotion queue.  Counters, watermarks and the
  /// interval index are kept.
  void clear_pages();

  const TierParams& params() const noexcept { return params_; }
  const StateConfig& config() const noexcept { return config_; }
  const Watermarks& watermarks() const noexcept { return wm_; }
  std::uint64_t fast_used() const noexcept { return fast_used_; }
  std::uint64_t slow_used() const noexcept { return pages_.size() - fast_used_; }
  std::uint64_t page_count() const noexcept { return pages_.size(); }
  std::uint64_t interval_index() const noexcept { return interval_index_; }
  PageState page(PageId id) const;
  std::span<const PageId> promotion_queue() const noexcept { return queue_; }
  const Counters& counters() const noexcept { return total_; }
  const Counters& interval_counters() const noexcept { return interval_; }
  const std::optional<IntervalReport>& last_report() const noexcept { return last_report_; }

  /// Full O(pages) consistency check; throws std::logic_error on violation.
  void audit() const;

 private:
  struct Slot {
    Tier tier;
    bool queued;
    bool attempted;  // dequeued for promotion this interval
    std::uint64_t interval_count;
    std::uint64_t lifetime_count;
  };

  std::uint64_t demote_coldest(std::uint64_t count);
  void move_to(PageId id, Tier tier);
  void charge_migration(bool promotion);
  void reset_page_counts();
  void check_conservation() const;

  TierParams params_;
  StateConfig config_;
  Watermarks wm_;
  std::vector<Slot> pages_;
  std::vector<PageId> queue_;
  std::uint64_t fast_used_ = 0;
  std::uint64_t interval_index_ = 0;
  Counters total_;
  Counters interval_;
  std::optional<IntervalReport> last_report_;
};

/// T = ops/ops_rate + (pacc_fast*lat_fast + pacc_slow*lat_slow)*(1 + beta*mig_ratio)
///     + (pm_pr + pm_de)*mig_cost + direct_reclaims*direct_reclaim_penalty
/// with mig_ratio = (pm_pr + pm_de) / max(1, pacc_fast + pacc_slow).
double exec_time_model(const IntervalReport& counters, const TierParams& params) noexcept;

/// CSV columns: interval_index,fm_target,pacc_fast,pacc_slow,pm_de,pm_pr,
/// mig_failures,direct_reclaims,exec_time
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const IntervalReport& report);

}  // namespace tiertune::sim
