#include <algorithm>
#include <cmath>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/numfmt.hpp"
#include "tiertune/perfdb.hpp"

namespace tiertune::perfdb {

Vec ConfigVector::to_array() const noexcept {
  return Vec{pm_de, pm_pr, ai, pacc_fast, pacc_slow, prof_int, hot_thr, free_page_thr, num_threads};
}

ConfigVector ConfigVector::from_array(const Vec& v) noexcept {
  return ConfigVector{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

void ConfigVector::validate() const {
  for (double x : to_array())
    if (!std::isfinite(x) || x < 0.0) throw Error(Errc::InvalidParams, "config components must be finite and >= 0");
  if (hot_thr < 2.0) throw Error(Errc::InvalidHotThr, "hot_thr must be >= 2");
  if (num_threads < 1.0) throw Error(Errc::InvalidParams, "num_threads must be >= 1");
  if (!(prof_int > 0.0)) throw Error(Errc::InvalidParams, "prof_int must be > 0");
}

bool config_less(const ConfigVector& a, const ConfigVector& b) noexcept {
  const Vec x = a.to_array();
  const Vec y = b.to_array();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

ConfigVector from_target(const workgen::WorkloadTarget& t) noexcept {
  auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  return ConfigVector{d(t.pm_de),    d(t.pm_pr),  t.ai,           d(t.pacc_fast),    d(t.pacc_slow),
                      t.prof_int,    d(t.hot_thr), d(t.free_page_thr), d(t.num_threads)};
}

workgen::WorkloadTarget to_target(const ConfigVector& c) {
  c.validate();
  auto count = [](double v, const char* name) {
    if (v != std::floor(v) || v > 9.0e15)
      throw Error(Errc::InfeasibleTarget, std::string(name) + " must be a whole number, got " + format_double(v));
    return static_cast<std::uint64_t>(v);
  };
  workgen::WorkloadTarget t;
  t.pm_de = count(c.pm_de, "pm_de");
  t.pm_pr = count(c.pm_pr, "pm_pr");
  t.ai = c.ai;
  t.pacc_fast = count(c.pacc_fast, "pacc_fast");
  t.pacc_slow = count(c.pacc_slow, "pacc_slow");
  t.prof_int = c.prof_int;
  t.hot_thr = count(c.hot_thr, "hot_thr");
  t.free_page_thr = count(c.free_page_thr, "free_page_thr");
  t.num_threads = count(c.num_threads, "num_threads");
  return t;
}

void ExecutionRecord::validate() const {
  if (samples.empty()) throw Error(Errc::MalformedRecord, "record has no samples");
  bool has_full = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (!(s.fm_fraction > 0.0 && s.fm_fraction <= 1.0))
      throw Error(Errc::MalformedRecord, "fm fraction outside (0, 1]");
    if (!std::isfinite(s.exec_time) || s.exec_time < 0.0)
      throw Error(Errc::MalformedRecord, "exec time must be finite and >= 0");
    if (i > 0 && !(s.fm_fraction < samples[i - 1].fm_fraction))
      throw Error(Errc::MalformedRecord, "samples must be strictly descending in fm fraction");
    if (s.fm_fraction == 1.0) has_full = true;
  }
  if (!has_full) throw Error(Errc::MalformedRecord, "record lacks the 1.0 sample");
}

NormStats NormStats::identity() noexcept {
  NormStats n;
  n.mean.fill(0.0);
  n.stddev.fill(1.0);
  return n;
}

NormStats NormStats::compute(std::span<const ExecutionRecord> records) noexcept {
  NormStats n = identity();
  if (records.empty()) return n;
  const double count = static_cast<double>(records.size());
  for (std::size_t d = 0; d < kDims; ++d) {
    double sum = 0.0;
    for (const auto& r : records) sum += r.config.to_array()[d];
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& r : records) {
      const double e = r.config.to_array()[d] - mean;
      ss += e * e;
    }
    const double sd = std::sqrt(ss / count);
    n.mean[d] = mean;
    n.stddev[d] = sd > 0.0 ? sd : 1.0;
  }
  return n;
}

Vec NormStats::normalize(const ConfigVector& c) const noexcept {
  Vec v = c.to_array();
  for (std::size_t d = 0; d < kDims; ++d) v[d] = (v[d] - mean[d]) / stddev[d];
  return v;
}

std::vector<LossPoint> loss_curve(const ExecutionRecord& record) {
  const Sample* full = nullptr;
  for (const auto& s : record.samples)
    if (s.fm_fraction == 1.0) full = &s;
  if (full == nullptr) throw Error(Errc::MalformedRecord, "record lacks the 1.0 sample");
  const double x = full->exec_time;
  if (!(x > 0.0)) throw Error(Errc::MalformedRecord, "1.0 sample has non-positive exec time");
  std::vector<LossPoint> curve;
  curve.reserve(record.samples.size());
  for (const auto& s : record.samples) curve.push_back(LossPoint{s.fm_fraction, (s.exec_time - x) / x});
  return curve;
}

std::vector<double> default_fm_fractions() {
  std::vector<double> f(100);
  for (int i = 0; i < 100; ++i) f[i] = 1.0 - 0.5 * static_cast<double>(i) / 99.0;
  f.front() = 1.0;
  f.back() = 0.5;
  return f;
}

std::uint64_t params_hash(const sim::TierParams& p) {
  std::string text;
  for (double v : {p.lat_fast, p.lat_slow, p.mig_cost, p.contention_beta, p.direct_reclaim_penalty, p.ops_rate}) {
    text += format_double(v);
    text += ';';
  }
  return fnv1a64(text);
}

}  // namespace tiertune::perfdb
