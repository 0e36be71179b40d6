#include <ostream>

#include <nlohmann/json.hpp>

#include "tiertune/numfmt.hpp"
#include "tiertune/tuner.hpp"

namespace tiertune::tuner {

void write_trace_csv(std::ostream& out, const TuneTrace& trace) {
  out << "interval,fm_pages,fm_fraction,predicted_pd,realized_pd,pm_de,pm_pr,mig_failures\n";
  for (const auto& r : trace.rows) {
    out << r.interval << ',' << r.fm_pages << ',' << format_double(r.fm_fraction) << ','
        << format_double(r.predicted_pd) << ',' << format_double(r.realized_pd) << ',' << r.pm_de << ','
        << r.pm_pr << ',' << r.mig_failures << '\n';
  }
}

void write_summary_json(std::ostream& out, const TuneTrace& trace, const TunerConfig& cfg, bool tuner_enabled) {
  const TraceSummary& s = trace.summary;
  nlohmann::ordered_json j;
  j["overall_pd"] = s.overall_pd;
  j["average_saving"] = s.average_saving;
  j["peak_saving"] = s.peak_saving;
  j["margin"] = s.margin;
  j["final_fm"] = s.final_fm;
  j["rss_fm"] = s.rss_fm;
  j["intervals"] = s.intervals;
  j["decisions_applied"] = s.decisions_applied;
  j["tuner"] = tuner_enabled ? "on" : "off";
  j["tau"] = cfg.tau;
  j["interval"] = cfg.interval;
  j["mode"] = to_string(cfg.mode);
  out << j.dump(2) << '\n';
}

void write_accuracy_csv(std::ostream& out, const AccuracyReport& report) {
  out << "fm_fraction,baseline_time,exec_time,pd,predicted_pd,error,absolute\n";
  for (const auto& r : report.rows) {
    out << format_double(r.fm_fraction) << ',' << format_double(r.baseline_time) << ','
        << format_double(r.exec_time) << ',' << format_double(r.pd) << ',' << format_double(r.predicted_pd)
        << ',' << format_double(r.error) << ',' << (r.absolute ? 1 : 0) << '\n';
  }
}

}  // namespace tiertune::tuner
