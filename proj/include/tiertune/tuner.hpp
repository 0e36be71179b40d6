#pragma once

// Closed-loop fast-memory tuner: samples interval counters, looks up the
// nearest database record and shrinks (or regrows) the fast tier to the
// smallest sampled size whose predicted loss stays within tau.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tiertune/perfdb.hpp"
#include "tiertune/tiersim.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::tuner {

enum class TuneMode { DecreaseOnly, Bidirectional };

const char* to_string(TuneMode mode) noexcept;
TuneMode tune_mode_from_string(const std::string& text);

struct TunerConfig {
  double tau = 0.05;
  double interval = 2.5;       // time-units between adjustments
  std::uint64_t min_step = 0;  // pages; 0 = max(1, round(1% of rss))
  TuneMode mode = TuneMode::Bidirectional;

  /// Throws InvalidParams unless 0 < tau < 1 and interval > 0.
  void validate() const;
};

/// Whole profiling intervals per tuning step: max(1, round(interval / prof_int)).
std::uint64_t intervals_per_step(const TunerConfig& cfg, double prof_int);
std::uint64_t effective_min_step(const TunerConfig& cfg, std::uint64_t rss_fm);

/// Builds the probe from a report and the state's static configuration.
/// Throws DegenerateInterval on an interval without accesses.
perfdb::ConfigVector sample_counters(const sim::IntervalReport& report, const sim::StateConfig& config);
/// Uses the state's latest report; DegenerateInterval if none exists yet.
perfdb::ConfigVector sample_counters(const sim::TieredMemState& state);

struct Choice {
  double fm_fraction = 1.0;
  std::uint64_t fm_pages = 0;
  double predicted_pd = 0.0;
};

/// Smallest sampled fraction with pd' <= tau; fm = max(1, round(f * rss_fm)).
/// Throws MalformedRecord on an empty curve or one without 1.0.
Choice choose_fast_mem_size(const std::vector<perfdb::LossPoint>& curve, double tau,
                            std::uint64_t rss_fm);

struct TunerDecision {
  bool degenerate = false;  // no probe this cycle; nothing else is filled
  perfdb::ConfigVector probe;
  std::size_t record_index = 0;
  perfdb::ConfigVector matched;
  std::vector<perfdb::LossPoint> curve;
  double chosen_fraction = 1.0;
  std::uint64_t chosen_fm = 0;
  double predicted_pd = 0.0;
  std::uint64_t previous_fm = 0;
  bool applied = false;
  sim::Watermarks watermarks;  // in force after the step
};

TunerDecision tune_step(sim::TieredMemState& state, const perfdb::Database& db,
                        const TunerConfig& cfg, std::uint64_t rss_fm);

/// Source of profiling intervals for the closed loop.
class WorkloadStream {
 public:
  virtual ~WorkloadStream() = default;
  virtual sim::TieredMemState make_state(const sim::TierParams& params) const = 0;
  /// Fast-memory size at fraction 1.0.
  virtual std::uint64_t rss_fm() const = 0;
  /// Runs one interval under the state's current fast-memory target.
  virtual sim::IntervalReport run_interval(sim::TieredMemState& state, std::uint64_t index) = 0;
};

/// Replays the same synthesized episode every interval.
class EpisodicStream final : public WorkloadStream {
 public:
  explicit EpisodicStream(workgen::WorkloadSpec spec);

  sim::TieredMemState make_state(const sim::TierParams& params) const override;
  std::uint64_t rss_fm() const override { return spec_.rss_fm(); }
  sim::IntervalReport run_interval(sim::TieredMemState& state, std::uint64_t index) override;

  const workgen::WorkloadSpec& spec() const noexcept { return spec_; }

 private:
  workgen::WorkloadSpec spec_;
};

struct TraceRow {
  std::uint64_t interval = 0;
  std::uint64_t fm_pages = 0;
  double fm_fraction = 1.0;
  double predicted_pd = 0.0;
  double realized_pd = 0.0;
  std::uint64_t pm_de = 0;
  std::uint64_t pm_pr = 0;
  std::uint64_t mig_failures = 0;
  double exec_time = 0.0;
  double baseline_time = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct TraceSummary {
  double overall_pd = 0.0;      // (sum y - sum x) / sum x
  double average_saving = 0.0;  // mean of 1 - fm/rss over intervals
  double peak_saving = 0.0;
  double margin = 0.0;          // largest single-interval (y - x) / sum x
  std::uint64_t final_fm = 0;
  std::uint64_t rss_fm = 0;
  std::uint64_t intervals = 0;
  std::uint64_t decisions_applied = 0;

  bool operator==(const TraceSummary&) const = default;
};

struct TuneTrace {
  std::vector<TraceRow> rows;
  std::vector<TunerDecision> decisions;
  TraceSummary summary;
};

struct LoopOptions {
  TunerConfig cfg;
  std::uint64_t horizon = 20;  // profiling intervals
  bool tuner_enabled = true;
};

/// Runs the tuned loop against a tuner-off baseline replay of the same stream.
/// `baseline_stream` may alias `stream` only for deterministic streams.
TuneTrace run_loop(WorkloadStream& stream, WorkloadStream& baseline_stream, const sim::TierParams& params,
                   const perfdb::Database& db, const LoopOptions& options);
TuneTrace run_loop(EpisodicStream& stream, const sim::TierParams& params, const perfdb::Database& db,
                   const LoopOptions& options);

struct AccuracyRow {
  double fm_fraction = 1.0;
  double baseline_time = 0.0;  // x
  double exec_time = 0.0;      // y
  double pd = 0.0;
  double predicted_pd = 0.0;
  double error = 0.0;          // |pd' - pd| / pd, or |pd' - pd| when pd == 0
  bool absolute = false;
};

struct AccuracyReport {
  perfdb::ConfigVector probe;
  std::size_t record_index = 0;
  std::vector<AccuracyRow> rows;
};

/// pd' at `fraction`, interpolating linearly between bracketing samples.
/// Throws InvalidTarget outside the sampled range.
double predicted_loss_at(const std::vector<perfdb::LossPoint>& curve, double fraction);

/// pd = (y - x) / x and the model error against `predicted_pd`.
AccuracyRow accuracy_row(double fm_fraction, double x, double y, double predicted_pd);

AccuracyReport evaluate_accuracy(const workgen::WorkloadSpec& spec, const sim::TierParams& params,
                                 const perfdb::Database& db, const std::vector<double>& fractions);

/// Columns: interval,fm_pages,fm_fraction,predicted_pd,realized_pd,pm_de,pm_pr,mig_failures
void write_trace_csv(std::ostream& out, const TuneTrace& trace);
void write_summary_json(std::ostream& out, const TuneTrace& trace, const TunerConfig& cfg, bool tuner_enabled);
/// Columns: fm_fraction,baseline_time,exec_time,pd,predicted_pd,error,absolute
void write_accuracy_csv(std::ostream& out, const AccuracyReport& report);

}  // namespace tiertune::tuner
