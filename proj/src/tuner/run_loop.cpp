#include <algorithm>

#include "tiertune/error.hpp"
#include "tiertune/tuner.hpp"

namespace tiertune::tuner {

EpisodicStream::EpisodicStream(workgen::WorkloadSpec spec) : spec_(std::move(spec)) {}

sim::TieredMemState EpisodicStream::make_state(const sim::TierParams& params) const {
  return workgen::make_state(spec_, params);
}

sim::IntervalReport EpisodicStream::run_interval(sim::TieredMemState& state, std::uint64_t) {
  return workgen::execute_at_target(spec_, state, state.watermarks().low_wm).report;
}

TuneTrace run_loop(WorkloadStream& stream, WorkloadStream& baseline_stream, const sim::TierParams& params,
                   const perfdb::Database& db, const LoopOptions& options) {
  const TunerConfig& cfg = options.cfg;
  cfg.validate();
  const std::uint64_t rss = stream.rss_fm();
  if (rss == 0) throw Error(Errc::InfeasibleTarget, "workload has no fast-memory footprint to tune");
  if (baseline_stream.rss_fm() != rss) throw Error(Errc::InvalidParams, "baseline stream differs in rss");

  sim::TieredMemState state = stream.make_state(params);
  sim::TieredMemState base = baseline_stream.make_state(params);
  state.set_fast_mem_target(rss);
  base.set_fast_mem_target(rss);
  const std::uint64_t every = intervals_per_step(cfg, state.config().prof_int);

  TuneTrace trace;
  trace.rows.reserve(options.horizon);
  double predicted = 0.0;
  double sum_x = 0.0, sum_y = 0.0, worst = 0.0, saving_sum = 0.0, saving_peak = 0.0;
  for (std::uint64_t i = 0; i < options.horizon; ++i) {
    const std::uint64_t fm = state.watermarks().low_wm;
    const sim::IntervalReport y = stream.run_interval(state, i);
    const sim::IntervalReport x = baseline_stream.run_interval(base, i);

    TraceRow row;
    row.interval = i;
    row.fm_pages = fm;
    row.fm_fraction = static_cast<double>(fm) / static_cast<double>(rss);
    row.predicted_pd = predicted;
    row.realized_pd = x.exec_time > 0.0 ? (y.exec_time - x.exec_time) / x.exec_time : 0.0;
    row.pm_de = y.pm_de;
    row.pm_pr = y.pm_pr;
    row.mig_failures = y.mig_failures;
    row.exec_time = y.exec_time;
    row.baseline_time = x.exec_time;
    trace.rows.push_back(row);

    sum_x += x.exec_time;
    sum_y += y.exec_time;
    worst = std::max(worst, y.exec_time - x.exec_time);
    const double saving = 1.0 - row.fm_fraction;
    saving_sum += saving;
    saving_peak = std::max(saving_peak, saving);

    if (options.tuner_enabled && (i + 1) % every == 0) {
      TunerDecision d = tune_step(state, db, cfg, rss);
      if (d.applied) {
        predicted = d.predicted_pd;
        ++trace.summary.decisions_applied;
      }
      trace.decisions.push_back(std::move(d));
    }
  }

  TraceSummary& s = trace.summary;
  s.overall_pd = sum_x > 0.0 ? (sum_y - sum_x) / sum_x : 0.0;
  s.margin = sum_x > 0.0 ? worst / sum_x : 0.0;
  s.average_saving = options.horizon > 0 ? saving_sum / static_cast<double>(options.horizon) : 0.0;
  s.peak_saving = saving_peak;
  s.final_fm = state.watermarks().low_wm;
  s.rss_fm = rss;
  s.intervals = options.horizon;
  return trace;
}

TuneTrace run_loop(EpisodicStream& stream, const sim::TierParams& params, const perfdb::Database& db,
                   const LoopOptions& options) {
  EpisodicStream baseline(stream.spec());
  return run_loop(stream, baseline, params, db, options);
}

}  // namespace tiertune::tuner
