#include <cmath>

#include "tiertune/error.hpp"
#include "tiertune/tuner.hpp"

namespace tiertune::tuner {

double predicted_loss_at(const std::vector<perfdb::LossPoint>& curve, double f) {
  // curve is ordered by descending fraction
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].fm_fraction == f) return curve[i].pd;
    if (i + 1 < curve.size() && curve[i].fm_fraction > f && f > curve[i + 1].fm_fraction) {
      const auto& hi = curve[i];
      const auto& lo = curve[i + 1];
      const double w = (f - lo.fm_fraction) / (hi.fm_fraction - lo.fm_fraction);
      return lo.pd + (hi.pd - lo.pd) * w;
    }
  }
  throw Error(Errc::InvalidTarget, "fraction outside the record's sampled range");
}

AccuracyRow accuracy_row(double fm_fraction, double x, double y, double predicted_pd) {
  AccuracyRow row;
  row.fm_fraction = fm_fraction;
  row.baseline_time = x;
  row.exec_time = y;
  row.pd = (y - x) / x;
  row.predicted_pd = predicted_pd;
  const double diff = std::fabs(predicted_pd - row.pd);
  row.absolute = row.pd == 0.0;
  row.error = row.absolute ? diff : diff / std::fabs(row.pd);
  return row;
}

AccuracyReport evaluate_accuracy(const workgen::WorkloadSpec& spec, const sim::TierParams& params,
                                 const perfdb::Database& db, const std::vector<double>& fractions) {
  std::vector<double> all{1.0};
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw Error(Errc::InvalidTarget, "fm fraction must lie in (0, 1]");
    all.push_back(f);
  }
  const auto results = workgen::execute_fractions(spec, params, all);
  const sim::StateConfig config = workgen::make_state(spec, params).config();

  AccuracyReport out;
  out.probe = sample_counters(results[0].report, config);
  const perfdb::Match m = db.nearest(out.probe);
  out.record_index = m.index;
  const auto curve = perfdb::loss_curve(db.records()[m.index]);

  const double x = results[0].exec_time;
  if (!(x > 0.0)) throw Error(Errc::DegenerateInterval, "baseline run has zero execution time");
  for (std::size_t i = 1; i < all.size(); ++i) {
    out.rows.push_back(accuracy_row(all[i], x, results[i].exec_time, predicted_loss_at(curve, all[i])));
  }
  return out;
}

}  // namespace tiertune::tuner
