#include <algorithm>
#include <cmath>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::workgen {

namespace {

std::uint64_t reference_size(const WorkloadSpec& spec) { return spec.post_init_capacity; }

void check_state(const WorkloadSpec& spec, const sim::TieredMemState& state) {
  if (state.params().fast_capacity < spec.init_fast_capacity)
    throw Error(Errc::InvalidParams, "state fast capacity " +
                                         std::to_string(state.params().fast_capacity) +
                                         " below the spec's " + std::to_string(spec.init_fast_capacity));
  if (state.params().slow_capacity < spec.slow_capacity)
    throw Error(Errc::InvalidParams, "state slow capacity too small for the spec");
  if (state.config().hot_thr != spec.target.hot_thr)
    throw Error(Errc::InvalidParams, "state hot_thr differs from the spec's");
}

// Everything up to and including the promotion pass of the main interval.
void run_until_shrink(const WorkloadSpec& spec, sim::TieredMemState& state, std::uint64_t fm_target) {
  check_state(spec, state);
  state.clear_pages();
  state.set_watermarks(state.default_watermarks());

  for (const PageGroup& g : spec.page_groups) {
    for (std::uint64_t p = 0; p < g.pages; ++p) {
      const sim::PageId id = state.add_page(g.tier);
      if (id != g.first_page + p || state.page(id).tier != g.tier)
        throw Error(Errc::InvalidParams, "page placement diverged from the spec");
    }
  }

  // Initialisation: touch every page once, then drop that interval.
  for (sim::PageId id = 0; id < state.page_count(); ++id) state.access_page(id, 0);
  state.run_promotion_queue();
  state.background_reclaim();
  state.reset_interval();

  if (spec.mode == ShrinkMode::PaperLiteral && fm_target > 0) {
    state.set_fast_mem_target(fm_target);
    state.background_reclaim();
  }

  // Main pass: one access per thread per turn.
  const auto& streams = spec.thread_streams;
  std::vector<std::size_t> run(streams.size(), 0);
  std::vector<std::uint64_t> used(streams.size(), 0);
  std::size_t live = 0;
  for (const auto& s : streams)
    if (!s.empty()) ++live;
  const std::uint64_t ops = spec.ai_ops_per_access;
  while (live > 0) {
    for (std::size_t t = 0; t < streams.size(); ++t) {
      if (run[t] >= streams[t].size()) continue;
      const AccessRun& r = streams[t][run[t]];
      state.access_page(r.page, ops);
      if (++used[t] == r.count) {
        used[t] = 0;
        if (++run[t] == streams[t].size()) --live;
      }
    }
  }
  state.run_promotion_queue();
}

ExecResult finish(const WorkloadSpec& spec, sim::TieredMemState& state, std::uint64_t fm_target) {
  if (spec.mode == ShrinkMode::Guaranteed && fm_target > 0) state.set_fast_mem_target(fm_target);
  state.background_reclaim();
  const sim::IntervalReport report = state.interval_tick();
  return ExecResult{report, report.exec_time};
}

}  // namespace

sim::TieredMemState make_state(const WorkloadSpec& spec, const sim::TierParams& base) {
  sim::TierParams p = base;
  p.fast_capacity = std::max<std::uint64_t>(1, spec.init_fast_capacity);
  p.slow_capacity = std::max<std::uint64_t>(1, spec.slow_capacity);
  sim::StateConfig cfg;
  cfg.hot_thr = spec.target.hot_thr;
  cfg.prof_int = spec.target.prof_int;
  cfg.free_page_thr = spec.target.free_page_thr;
  cfg.num_threads = spec.target.num_threads;
  return sim::TieredMemState(p, cfg);
}

std::uint64_t target_for_fraction(const WorkloadSpec& spec, double fm_fraction) {
  if (!(fm_fraction > 0.0 && fm_fraction <= 1.0))
    throw Error(Errc::InvalidTarget, "fm fraction must lie in (0, 1]");
  const std::uint64_t ref = reference_size(spec);
  if (ref == 0) return 0;
  const auto scaled = static_cast<std::uint64_t>(std::llround(fm_fraction * static_cast<double>(ref)));
  return std::clamp<std::uint64_t>(scaled, 1, std::max<std::uint64_t>(1, spec.init_fast_capacity));
}

ExecResult execute_at_target(const WorkloadSpec& spec, sim::TieredMemState& state,
                             std::uint64_t fm_target) {
  run_until_shrink(spec, state, fm_target);
  return finish(spec, state, fm_target);
}

ExecResult execute(const WorkloadSpec& spec, sim::TieredMemState& state, double fm_fraction) {
  return execute_at_target(spec, state, target_for_fraction(spec, fm_fraction));
}

std::vector<ExecResult> execute_fractions(const WorkloadSpec& spec, const sim::TierParams& base,
                                          const std::vector<double>& fractions) {
  std::vector<ExecResult> out;
  out.reserve(fractions.size());
  if (spec.mode == ShrinkMode::Guaranteed) {
    // The fraction only enters after the promotion pass; share the prefix.
    sim::TieredMemState prefix = make_state(spec, base);
    run_until_shrink(spec, prefix, 0);
    for (double f : fractions) {
      sim::TieredMemState state = prefix;
      out.push_back(finish(spec, state, target_for_fraction(spec, f)));
    }
  } else {
    for (double f : fractions) {
      sim::TieredMemState state = make_state(spec, base);
      out.push_back(execute(spec, state, f));
    }
  }
  return out;
}

}  // namespace tiertune::workgen
