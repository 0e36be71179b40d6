#include <cmath>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::workgen {

const char* to_string(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::Demote: return "demote";
    case GroupKind::FastSteady: return "fast";
    case GroupKind::FastResidual: return "fast-residual";
    case GroupKind::Promote: return "promote";
    case GroupKind::SlowSteady: return "slow";
    case GroupKind::SlowResidual: return "slow-residual";
    case GroupKind::Cold: return "cold";
  }
  return "cold";
}

std::uint64_t WorkloadSpec::total_pages() const noexcept {
  std::uint64_t n = 0;
  for (const auto& g : page_groups) n += g.pages;
  return n;
}

std::uint64_t WorkloadSpec::total_accesses() const noexcept {
  std::uint64_t n = 0;
  for (const auto& g : page_groups) n += g.pages * g.accesses_per_page;
  return n;
}

namespace {

void append_run(std::vector<AccessRun>& stream, sim::PageId page, std::uint64_t count) {
  if (count == 0) return;
  if (!stream.empty() && stream.back().page == page)
    stream.back().count += count;
  else
    stream.push_back(AccessRun{page, count});
}

}  // namespace

WorkloadSpec synthesize(const WorkloadTarget& target, ShrinkMode mode) {
  if (target.num_threads < 1) throw Error(Errc::InfeasibleTarget, "num_threads must be >= 1");
  if (!std::isfinite(target.ai) || target.ai < 0.0)
    throw Error(Errc::InfeasibleTarget, "ai must be finite and >= 0");
  if (!(target.prof_int > 0.0)) throw Error(Errc::InfeasibleTarget, "prof_int must be > 0");

  const PagePlan pages = plan_pages(target);
  const MigrationPlan mig = plan_migrations(target, mode);
  const std::uint64_t h = target.hot_thr;

  WorkloadSpec spec;
  spec.mode = mode;
  spec.target = target;
  spec.np_fast = pages.np_fast;
  spec.np_slow = pages.np_slow;
  spec.promo_candidates = mig.promo_candidates;
  spec.demo_candidates = mig.demo_candidates;
  spec.init_fast_capacity = mig.init_fast_capacity;
  spec.post_init_capacity = mig.post_init_capacity;
  spec.ai_ops_per_access = static_cast<std::uint64_t>(std::llround(target.ai));

  // Demotion candidates take the lowest ids so they win every coldness tie.
  sim::PageId next = 0;
  auto add_group = [&](GroupKind kind, sim::Tier tier, std::uint64_t n, std::uint64_t acc) {
    if (n == 0) return;
    spec.page_groups.push_back(PageGroup{kind, tier, next, n, acc});
    next += n;
  };
  add_group(GroupKind::Demote, sim::Tier::Fast, target.pm_de, 1);
  add_group(GroupKind::FastSteady, sim::Tier::Fast, pages.np_fast, h - 1);
  add_group(GroupKind::FastResidual, sim::Tier::Fast, pages.residual_fast > 0 ? 1 : 0,
            pages.residual_fast);
  add_group(GroupKind::Promote, sim::Tier::Slow, target.pm_pr, h);
  add_group(GroupKind::SlowSteady, sim::Tier::Slow, pages.np_slow, h - 1);
  add_group(GroupKind::SlowResidual, sim::Tier::Slow, pages.residual_slow > 0 ? 1 : 0,
            pages.residual_slow);
  if (target.rss > 0) {
    if (target.rss < next)
      throw Error(Errc::InfeasibleTarget, "rss (" + std::to_string(target.rss) +
                                              ") smaller than the planned " + std::to_string(next) +
                                              " pages");
    add_group(GroupKind::Cold, sim::Tier::Slow, target.rss - next, 0);
  }
  spec.slow_capacity = next > 0 ? next : 1;
  if (spec.init_fast_capacity == 0) spec.init_fast_capacity = 1;

  // Access k of the page-major sequence goes to thread k mod T, so every
  // group's share differs by at most one access between threads.
  const std::uint64_t threads = target.num_threads;
  spec.thread_streams.assign(threads, {});
  std::uint64_t offset = 0;
  for (const PageGroup& g : spec.page_groups) {
    const std::uint64_t base = g.accesses_per_page / threads;
    const std::uint64_t rem = g.accesses_per_page % threads;
    for (std::uint64_t p = 0; p < g.pages; ++p) {
      const sim::PageId page = g.first_page + p;
      const std::uint64_t start = offset % threads;
      for (std::uint64_t t = 0; t < threads; ++t) {
        const std::uint64_t rank = (t + threads - start) % threads;
        append_run(spec.thread_streams[t], page, base + (rank < rem ? 1 : 0));
      }
      offset += g.accesses_per_page;
    }
  }
  return spec;
}

}  // namespace tiertune::workgen
