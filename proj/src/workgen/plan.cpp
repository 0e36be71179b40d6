#include <string>

#include "tiertune/error.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::workgen {

namespace {

// Keeps a single episode comfortably inside memory and u64 arithmetic.
constexpr std::uint64_t kMaxPages = std::uint64_t{1} << 28;

void require_hot_thr(const WorkloadTarget& t) {
  if (t.hot_thr < 2)
    throw Error(Errc::InvalidHotThr, "hot_thr must be >= 2, got " + std::to_string(t.hot_thr));
}

}  // namespace

const char* to_string(ShrinkMode mode) noexcept {
  return mode == ShrinkMode::Guaranteed ? "guaranteed" : "paper-literal";
}

ShrinkMode shrink_mode_from_string(const std::string& text) {
  if (text == "guaranteed") return ShrinkMode::Guaranteed;
  if (text == "paper-literal") return ShrinkMode::PaperLiteral;
  throw Error(Errc::InvalidParams, "unknown shrink mode '" + text + "'");
}

AdjustedPacc adjust_pacc(const WorkloadTarget& t) {
  require_hot_thr(t);
  if (t.pacc_fast < t.pm_de)
    throw Error(Errc::InfeasibleTarget, "pacc_fast (" + std::to_string(t.pacc_fast) +
                                            ") < pm_de (" + std::to_string(t.pm_de) + ")");
  if (t.pm_pr > t.pacc_slow / t.hot_thr || t.pacc_slow < t.pm_pr * t.hot_thr)
    throw Error(Errc::InfeasibleTarget, "pacc_slow (" + std::to_string(t.pacc_slow) +
                                            ") < pm_pr * hot_thr (" + std::to_string(t.pm_pr) +
                                            " * " + std::to_string(t.hot_thr) + ")");
  return AdjustedPacc{t.pacc_fast - t.pm_de, t.pacc_slow - t.pm_pr * t.hot_thr};
}

PagePlan plan_pages(const WorkloadTarget& t) {
  const AdjustedPacc adj = adjust_pacc(t);
  const std::uint64_t per_page = t.hot_thr - 1;
  return PagePlan{adj.fast / per_page, adj.fast % per_page, adj.slow / per_page,
                  adj.slow % per_page};
}

MigrationPlan plan_migrations(const WorkloadTarget& t, ShrinkMode mode) {
  const PagePlan pages = plan_pages(t);
  const std::uint64_t planned =
      pages.fast_pages() + pages.slow_pages() + t.pm_de + t.pm_pr;
  if (planned > kMaxPages || t.free_page_thr > kMaxPages || (t.rss > kMaxPages))
    throw Error(Errc::InfeasibleTarget, "workload exceeds " + std::to_string(kMaxPages) + " pages");

  MigrationPlan plan;
  plan.promo_candidates = t.pm_pr;
  plan.demo_candidates = t.pm_de;
  plan.init_fast_capacity = planned + t.free_page_thr;
  if (mode == ShrinkMode::Guaranteed) {
    // fast occupancy once every promotion has landed, minus the demotions
    plan.post_init_capacity = pages.fast_pages() + t.pm_pr;
  } else {
    plan.post_init_capacity = plan.init_fast_capacity - t.pm_pr;
  }
  return plan;
}

}  // namespace tiertune::workgen
