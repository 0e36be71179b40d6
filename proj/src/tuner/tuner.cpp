#include <algorithm>
#include <cmath>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/tuner.hpp"

namespace tiertune::tuner {

const char* to_string(TuneMode mode) noexcept {
  return mode == TuneMode::DecreaseOnly ? "decrease-only" : "bidirectional";
}

TuneMode tune_mode_from_string(const std::string& text) {
  if (text == "decrease-only") return TuneMode::DecreaseOnly;
  if (text == "bidirectional") return TuneMode::Bidirectional;
  throw Error(Errc::InvalidParams, "unknown tuner mode '" + text + "'");
}

void TunerConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::InvalidParams, "tau must lie in (0, 1)");
  if (!(interval > 0.0) || !std::isfinite(interval)) throw Error(Errc::InvalidParams, "interval must be > 0");
}

std::uint64_t intervals_per_step(const TunerConfig& cfg, double prof_int) {
  if (!(prof_int > 0.0)) throw Error(Errc::InvalidParams, "prof_int must be > 0");
  const double steps = std::round(cfg.interval / prof_int);
  return steps < 1.0 ? 1 : static_cast<std::uint64_t>(steps);
}

std::uint64_t effective_min_step(const TunerConfig& cfg, std::uint64_t rss_fm) {
  if (cfg.min_step > 0) return cfg.min_step;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(0.01 * static_cast<double>(rss_fm))));
}

perfdb::ConfigVector sample_counters(const sim::IntervalReport& r, const sim::StateConfig& config) {
  if (r.accesses() == 0) throw Error(Errc::DegenerateInterval, "interval has no memory accesses");
  perfdb::ConfigVector c;
  c.pm_de = static_cast<double>(r.pm_de);
  c.pm_pr = static_cast<double>(r.pm_pr);
  c.ai = static_cast<double>(r.ops_executed) / static_cast<double>(r.accesses());
  c.pacc_fast = static_cast<double>(r.pacc_fast);
  c.pacc_slow = static_cast<double>(r.pacc_slow);
  c.prof_int = config.prof_int;
  c.hot_thr = static_cast<double>(config.hot_thr);
  c.free_page_thr = static_cast<double>(config.free_page_thr);
  c.num_threads = static_cast<double>(config.num_threads);
  return c;
}

perfdb::ConfigVector sample_counters(const sim::TieredMemState& state) {
  if (!state.last_report()) throw Error(Errc::DegenerateInterval, "no profiling interval has elapsed");
  return sample_counters(*state.last_report(), state.config());
}

Choice choose_fast_mem_size(const std::vector<perfdb::LossPoint>& curve, double tau, std::uint64_t rss_fm) {
  const perfdb::LossPoint* best = nullptr;
  bool has_full = false;
  for (const auto& p : curve) {
    if (p.fm_fraction == 1.0) has_full = true;
    if (p.pd <= tau && (best == nullptr || p.fm_fraction < best->fm_fraction)) best = &p;
  }
  if (!has_full) throw Error(Errc::MalformedRecord, "loss curve lacks the 1.0 point");
  Choice c;
  if (best != nullptr) {
    c.fm_fraction = best->fm_fraction;
    c.predicted_pd = best->pd;
  }
  if (c.fm_fraction == 1.0) {
    c.predicted_pd = 0.0;
    c.fm_pages = rss_fm;
  } else {
    const auto pages = std::llround(c.fm_fraction * static_cast<double>(rss_fm));
    c.fm_pages = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(pages));
  }
  return c;
}

TunerDecision tune_step(sim::TieredMemState& state, const perfdb::Database& db, const TunerConfig& cfg,
                        std::uint64_t rss_fm) {
  cfg.validate();
  TunerDecision d;
  d.previous_fm = state.watermarks().low_wm;
  d.watermarks = state.watermarks();
  try {
    d.probe = sample_counters(state);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateInterval) throw;
    d.degenerate = true;
    return d;
  }
  const perfdb::Match m = db.nearest(d.probe);
  const perfdb::ExecutionRecord& rec = db.records()[m.index];
  d.record_index = m.index;
  d.matched = rec.config;
  d.curve = perfdb::loss_curve(rec);
  const Choice c = choose_fast_mem_size(d.curve, cfg.tau, rss_fm);
  d.chosen_fraction = c.fm_fraction;
  d.chosen_fm = std::min(c.fm_pages, state.params().fast_capacity);
  d.predicted_pd = c.predicted_pd;

  const std::uint64_t prev = d.previous_fm;
  const std::uint64_t delta = d.chosen_fm > prev ? d.chosen_fm - prev : prev - d.chosen_fm;
  const bool grows = d.chosen_fm > prev;
  if (delta > 0 && delta >= effective_min_step(cfg, rss_fm) &&
      !(grows && cfg.mode == TuneMode::DecreaseOnly)) {
    d.watermarks = state.set_fast_mem_target(d.chosen_fm);
    d.applied = true;
  }
  return d;
}

}  // namespace tiertune::tuner
