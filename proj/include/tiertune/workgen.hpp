#pragma once

// Micro-benchmark planner.  Given a per-interval target (page accesses per
// tier, promotions, demotions, arithmetic intensity) it lays out page groups
// and per-thread access streams that reproduce the target counters when
// replayed through the simulator.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tiertune/tiersim.hpp"

namespace tiertune::workgen {

/// Guaranteed: the fast tier is shrunk after the promotion pass so the
/// reclaim daemon demotes exactly pm_de pages.  PaperLiteral: the fast tier is
/// shrunk by pm_pr right after the initialisation pass.
enum class ShrinkMode { Guaranteed, PaperLiteral };

const char* to_string(ShrinkMode mode) noexcept;
ShrinkMode shrink_mode_from_string(const std::string& text);

struct WorkloadTarget {
  std::uint64_t pacc_fast = 0;
  std::uint64_t pacc_slow = 0;
  std::uint64_t pm_pr = 0;
  std::uint64_t pm_de = 0;
  double ai = 0.0;  // compute ops per access
  std::uint64_t rss = 0;  // 0 = exactly the planned pages
  std::uint64_t hot_thr = 2;
  std::uint64_t free_page_thr = 0;
  double prof_int = 1.0;
  std::uint64_t num_threads = 1;

  bool operator==(const WorkloadTarget&) const = default;
};

struct AdjustedPacc {
  std::uint64_t fast = 0;
  std::uint64_t slow = 0;
};

/// Steady pages take hot_thr - 1 accesses each; the remainder of the division
/// goes to a single residual page.
struct PagePlan {
  std::uint64_t np_fast = 0;
  std::uint64_t residual_fast = 0;  // accesses on the residual fast page, 0 = none
  std::uint64_t np_slow = 0;
  std::uint64_t residual_slow = 0;

  std::uint64_t fast_pages() const noexcept { return np_fast + (residual_fast > 0 ? 1 : 0); }
  std::uint64_t slow_pages() const noexcept { return np_slow + (residual_slow > 0 ? 1 : 0); }
};

struct MigrationPlan {
  std::uint64_t promo_candidates = 0;
  std::uint64_t demo_candidates = 0;
  std::uint64_t init_fast_capacity = 0;
  std::uint64_t post_init_capacity = 0;
};

AdjustedPacc adjust_pacc(const WorkloadTarget& target);
PagePlan plan_pages(const WorkloadTarget& target);
MigrationPlan plan_migrations(const WorkloadTarget& target, ShrinkMode mode = ShrinkMode::Guaranteed);

enum class GroupKind { Demote, FastSteady, FastResidual, Promote, SlowSteady, SlowResidual, Cold };

const char* to_string(GroupKind kind) noexcept;

struct PageGroup {
  GroupKind kind = GroupKind::Cold;
  sim::Tier tier = sim::Tier::Slow;
  sim::PageId first_page = 0;
  std::uint64_t pages = 0;
  std::uint64_t accesses_per_page = 0;

  bool operator==(const PageGroup&) const = default;
};

struct AccessRun {
  sim::PageId page = 0;
  std::uint64_t count = 0;

  bool operator==(const AccessRun&) const = default;
};

inline constexpr int kSpecVersion = 1;

struct WorkloadSpec {
  int version = kSpecVersion;
  ShrinkMode mode = ShrinkMode::Guaranteed;
  WorkloadTarget target;
  std::vector<PageGroup> page_groups;  // ordered by first_page, contiguous ids
  std::uint64_t np_fast = 0;
  std::uint64_t np_slow = 0;
  std::uint64_t promo_candidates = 0;
  std::uint64_t demo_candidates = 0;
  std::uint64_t init_fast_capacity = 0;
  std::uint64_t post_init_capacity = 0;
  std::uint64_t slow_capacity = 0;
  std::uint64_t ai_ops_per_access = 0;
  std::vector<std::vector<AccessRun>> thread_streams;

  std::uint64_t total_pages() const noexcept;
  std::uint64_t total_accesses() const noexcept;
  /// Fast-memory size the workload runs with at fraction 1.0.
  std::uint64_t rss_fm() const noexcept { return post_init_capacity; }

  bool operator==(const WorkloadSpec&) const = default;
};

/// Pure: plans pages and migrations and deals every access across threads.
WorkloadSpec synthesize(const WorkloadTarget& target, ShrinkMode mode = ShrinkMode::Guaranteed);

struct ExecResult {
  sim::IntervalReport report;
  double exec_time = 0.0;
};

/// State sized for `spec` (capacities from the spec, costs from `base`).
sim::TieredMemState make_state(const WorkloadSpec& spec, const sim::TierParams& base);

/// Fast-memory target used at `fm_fraction`: round(fraction * reference),
/// clamped to [1, capacity].  Throws InvalidTarget outside (0, 1].
std::uint64_t target_for_fraction(const WorkloadSpec& spec, double fm_fraction);

/// Runs one episode: places pages, touches each once, drops that warm-up
/// interval, runs the main pass and the management passes, and reports the
/// main interval.  Pages already in `state` are discarded first.
ExecResult execute(const WorkloadSpec& spec, sim::TieredMemState& state, double fm_fraction = 1.0);
ExecResult execute_at_target(const WorkloadSpec& spec, sim::TieredMemState& state,
                             std::uint64_t fm_target);

/// One result per fraction, each on a fresh state.
std::vector<ExecResult> execute_fractions(const WorkloadSpec& spec, const sim::TierParams& base,
                                          const std::vector<double>& fractions);

void write_spec(std::ostream& out, const WorkloadSpec& spec);
WorkloadSpec read_spec(std::istream& in);
void write_target(std::ostream& out, const WorkloadTarget& target);
WorkloadTarget read_target(std::istream& in);

}  // namespace tiertune::workgen
