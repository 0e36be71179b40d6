// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "tiertune/harness.hpp"
#include "tiertune/perfdb.hpp"
#include "tiertune/tiersim.hpp"
#include "tiertune/tuner.hpp"
#include "tiertune/workgen.hpp"

using namespace tiertune;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Uniform feasible targets: hot_thr in [2,20], pm in [0,50], pacc in [1e2,1e5].
std::vector<workgen::WorkloadTarget> random_targets(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  std::vector<workgen::WorkloadTarget> out;
  while (out.size() < n) {
    workgen::WorkloadTarget t;
    t.hot_thr = uni(2, 20);
    t.pm_pr = uni(0, 50);
    t.pm_de = uni(0, 50);
    t.pacc_fast = uni(100, 100000);
    t.pacc_slow = uni(100, 100000);
    t.ai = static_cast<double>(uni(0, 16)) / 2.0;
    t.free_page_thr = uni(0, 64);
    t.num_threads = uni(1, 8);
    if (t.pacc_fast < t.pm_de || t.pacc_slow < t.pm_pr * t.hot_thr) continue;  // infeasible, redraw
    out.push_back(t);
  }
  return out;
}

const std::vector<workgen::WorkloadTarget>& shared_targets() {
  static const auto targets = random_targets(1000, 20240601);
  return targets;
}

Outcome generator_soundness() {
  const auto t0 = Clock::now();
  std::size_t bad = 0;
  std::string first;
  for (const auto& t : shared_targets()) {
    const workgen::WorkloadSpec spec = workgen::synthesize(t, workgen::ShrinkMode::Guaranteed);
    sim::TieredMemState state = workgen::make_state(spec, sim::TierParams{});
    const sim::IntervalReport r = workgen::execute(spec, state, 1.0).report;
    const std::uint64_t ops = static_cast<std::uint64_t>(std::llround(t.ai)) * (t.pacc_fast + t.pacc_slow);
    if (r.pacc_fast != t.pacc_fast || r.pacc_slow != t.pacc_slow || r.pm_pr != t.pm_pr || r.pm_de != t.pm_de ||
        r.ops_executed != ops) {
      if (bad++ == 0)
        first = " first: target " + std::to_string(t.pacc_fast) + "/" + std::to_string(t.pacc_slow) + "/" +
                std::to_string(t.pm_pr) + "/" + std::to_string(t.pm_de) + " got " + std::to_string(r.pacc_fast) +
                "/" + std::to_string(r.pacc_slow) + "/" + std::to_string(r.pm_pr) + "/" + std::to_string(r.pm_de);
    }
  }
  const double s = seconds_since(t0);
  return {bad == 0 && s < 60.0, std::to_string(shared_targets().size()) + " targets, " + std::to_string(bad) +
                                    " mismatches, " + fmt("%.1f s (limit 60)", s) + first};
}

Outcome planner_identities() {
  std::size_t bad = 0;
  for (const auto& t : shared_targets()) {
    const workgen::PagePlan p = workgen::plan_pages(t);
    const std::uint64_t adj_fast = t.pacc_fast - t.pm_de;
    const std::uint64_t adj_slow = t.pacc_slow - t.pm_pr * t.hot_thr;
    if (p.np_fast * (t.hot_thr - 1) + p.residual_fast != adj_fast) ++bad;
    if (p.np_slow * (t.hot_thr - 1) + p.residual_slow != adj_slow) ++bad;
    if (p.residual_fast >= t.hot_thr - 1 || p.residual_slow >= t.hot_thr - 1) ++bad;
  }
  return {bad == 0, std::to_string(shared_targets().size()) + " targets x 2 tiers, " + std::to_string(bad) +
                        " identity violations"};
}

Outcome watermark_machine() {
  constexpr std::uint64_t kPages = 10000;
  std::mt19937_64 rng(77);
  std::size_t reclaim_checks = 0, high_violations = 0, quiet_trials = 0, quiet_violations = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const bool resize = trial % 2 == 0;  // odd trials keep fast usage under low
    sim::TierParams p;
    p.fast_capacity = 6000;
    p.slow_capacity = kPages;
    sim::StateConfig c;
    c.hot_thr = 2 + trial % 4;
    sim::TieredMemState s(p, c);
    s.set_fast_mem_target(5000);
    for (std::uint64_t i = 0; i < kPages; ++i) s.add_page(i < 3000 ? sim::Tier::Fast : sim::Tier::Slow);
    bool exceeded = false;
    std::geometric_distribution<std::uint64_t> hot(0.0005);
    for (int step = 0; step < 60000; ++step) {
      const auto op = rng() % 1000;
      if (op < 960) {
        s.access_page(std::min<std::uint64_t>(hot(rng), kPages - 1), 0);
      } else if (op < 980) {
        s.run_promotion_queue();
      } else if (op < 990) {
        s.background_reclaim();
        ++reclaim_checks;
        if (s.fast_used() > s.watermarks().high_wm) ++high_violations;
      } else if (op < 995) {
        if (resize) s.set_fast_mem_target(1 + rng() % 6000);
      } else {
        s.interval_tick();
      }
      if (s.fast_used() > s.watermarks().low_wm) exceeded = true;
    }
    s.audit();
    if (!exceeded) {
      ++quiet_trials;
      if (s.counters().pm_de != 0) ++quiet_violations;
    }
  }
  const bool rule = sim::watermarks_for_target(1000) == sim::Watermarks{800, 1000, 1000};
  sim::TierParams p;
  p.fast_capacity = 1000;
  sim::TieredMemState s(p, sim::StateConfig{});
  const bool set_rule = s.set_fast_mem_target(1000) == sim::Watermarks{800, 1000, 1000};
  const bool pass = high_violations == 0 && quiet_trials > 0 && quiet_violations == 0 && rule && set_rule;
  return {pass, "(a) " + std::to_string(reclaim_checks) + " reclaim passes, " + std::to_string(high_violations) +
                    " above high; (b) " + std::to_string(quiet_trials) + " trials under low, " +
                    std::to_string(quiet_violations) + " with demotions; (c) set_fast_mem_target(1000) -> " +
                    (set_rule ? "{800,1000,1000}" : "WRONG")};
}

Outcome exact_nearest() {
  std::mt19937_64 rng(4242);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto cfg = [&] {
    perfdb::ConfigVector c;
    c.pm_de = std::floor(u(0, 51));
    c.pm_pr = std::floor(u(0, 51));
    c.ai = std::floor(u(0, 33));
    c.pacc_fast = std::floor(u(100, 100001));
    c.pacc_slow = std::floor(u(100, 100001));
    c.prof_int = 1;
    c.hot_thr = std::floor(u(2, 21));
    c.free_page_thr = std::floor(u(0, 65));
    c.num_threads = std::floor(u(1, 9));
    return c;
  };
  std::vector<perfdb::ExecutionRecord> rs;
  for (int i = 0; i < 10000; ++i)
    rs.push_back(perfdb::ExecutionRecord{cfg(), {{1.0, 100.0}, {0.5, 150.0}}, {}});
  const perfdb::Database db(std::move(rs));

  std::vector<perfdb::ConfigVector> probes;
  for (int i = 0; i < 10000; ++i) probes.push_back(cfg());
  std::size_t agree = 0;
  double total = 0.0;
  for (const auto& q : probes) {
    const auto t0 = Clock::now();
    const perfdb::Match m = db.nearest(q, perfdb::SearchMethod::Index);
    total += seconds_since(t0);
    const perfdb::Match ref = db.nearest(q, perfdb::SearchMethod::ScanSerial);
    if (m.index == ref.index && m.distance == ref.distance) ++agree;
  }
  const double mean_ms = 1e3 * total / static_cast<double>(probes.size());
  return {agree == probes.size() && mean_ms <= 5.0,
          std::to_string(agree) + "/" + std::to_string(probes.size()) + " agree with linear scan, mean " +
              fmt("%.4f ms per query (limit 5)", mean_ms)};
}

workgen::WorkloadTarget stationary() {
  workgen::WorkloadTarget t;
  t.pacc_fast = 20000;
  t.pacc_slow = 20000;
  t.pm_pr = 20;
  t.pm_de = 20;
  t.ai = 1;
  t.hot_thr = 4;
  t.free_page_thr = 16;
  return t;
}

perfdb::Database build_db(const std::vector<workgen::WorkloadTarget>& targets, std::vector<double> fractions) {
  std::vector<perfdb::ConfigVector> grid;
  for (const auto& t : targets) grid.push_back(perfdb::from_target(t));
  perfdb::BuildOptions o;
  o.fm_fractions = std::move(fractions);
  return perfdb::build(grid, o).db;
}

std::vector<workgen::WorkloadTarget> with_distractors(const workgen::WorkloadTarget& t) {
  std::vector<workgen::WorkloadTarget> out{t};
  for (std::uint64_t k : {4, 9}) {
    workgen::WorkloadTarget d = t;
    d.pacc_fast *= k;
    d.pacc_slow *= k;
    d.ai = t.ai * static_cast<double>(k) + 8;
    d.hot_thr = t.hot_thr + k;
    out.push_back(d);
  }
  return out;
}

Outcome accuracy() {
  const std::vector<double> cols{0.99, 0.98, 0.97, 0.96, 0.95, 0.88, 0.85};
  std::vector<double> fr = perfdb::default_fm_fractions();
  fr.insert(fr.end(), cols.begin(), cols.end());

  workgen::WorkloadTarget base = stationary();
  base.ai = 20;
  const perfdb::Database db = build_db(with_distractors(base), fr);

  const auto self = tuner::evaluate_accuracy(workgen::synthesize(base), sim::TierParams{}, db, cols);
  double worst_self = 0.0;
  for (const auto& r : self.rows) worst_self = std::max(worst_self, r.error);

  workgen::WorkloadTarget perturbed = base;
  perturbed.ai = base.ai * 1.1;
  const auto pert = tuner::evaluate_accuracy(workgen::synthesize(perturbed), sim::TierParams{}, db, cols);
  // Non-decreasing as the fraction drops; ties within 1e-12 relative count as equal.
  bool monotone = true, flat = true;
  std::string column;
  for (std::size_t i = 0; i < pert.rows.size(); ++i) {
    column += (i ? " " : "") + fmt("%.6g", pert.rows[i].error);
    if (i > 0 && pert.rows[i].error < pert.rows[i - 1].error * (1.0 - 1e-12)) monotone = false;
    if (i > 0 && pert.rows[i].error > pert.rows[i - 1].error * (1.0 + 1e-12)) flat = false;
  }
  const bool pass = worst_self <= 1e-9 && monotone;
  return {pass, "self-consistent max error " + fmt("%.3g", worst_self) + "; AI+10% errors 0.99..0.85: [" + column +
                    "] " + (!monotone ? "DECREASING" : flat ? "non-decreasing (flat: AI only shifts the additive compute term)" : "non-decreasing")};
}

struct LoopFixture {
  tuner::EpisodicStream stream{workgen::synthesize(stationary())};
  perfdb::Database db = build_db(with_distractors(stationary()), perfdb::default_fm_fractions());

  tuner::TuneTrace run(double tau, double interval, std::uint64_t horizon = 40) {
    tuner::LoopOptions o;
    o.cfg.tau = tau;
    o.cfg.interval = interval;
    o.horizon = horizon;
    return tuner::run_loop(stream, sim::TierParams{}, db, o);
  }
};

LoopFixture& loop_fixture() {
  static LoopFixture f;
  return f;
}

Outcome closed_loop() {
  const auto t0 = Clock::now();
  auto& f = loop_fixture();
  const tuner::TuneTrace t = f.run(0.05, 2.5);
  const auto& s = t.summary;
  bool predicted_ok = true;
  for (const auto& d : t.decisions)
    if (d.applied && d.predicted_pd > 0.05) predicted_ok = false;
  const double secs = seconds_since(t0);
  const bool pass = s.overall_pd <= 0.05 + s.margin && s.final_fm < s.rss_fm && predicted_ok && secs < 120.0;
  return {pass, "overall pd " + fmt("%.5f", s.overall_pd) + " <= 0.05 + margin " + fmt("%.5f", s.margin) +
                    ", final fm " + std::to_string(s.final_fm) + " < rss " + std::to_string(s.rss_fm) +
                    ", average saving " + fmt("%.4f", s.average_saving) + fmt(", %.1f s (limit 120)", secs)};
}

Outcome tau_sweep() {
  auto& f = loop_fixture();
  bool pass = true;
  double prev_saving = -1.0;
  std::string detail;
  for (double tau : {0.05, 0.10, 0.15}) {
    const auto s = f.run(tau, 2.5).summary;
    if (s.average_saving < prev_saving) pass = false;
    if (s.overall_pd > tau + s.margin) pass = false;
    prev_saving = s.average_saving;
    detail += fmt("tau %.2f: ", tau) + fmt("saving %.4f ", s.average_saving) + fmt("pd %.4f; ", s.overall_pd);
  }
  return {pass, detail + (pass ? "saving non-decreasing, pd within tau + margin" : "trend violated")};
}

Outcome cadence() {
  auto& f = loop_fixture();
  bool pass = true;
  std::string detail;
  const std::vector<double> intervals{8.0, 4.0, 2.0, 1.0};
  tuner::TraceSummary prev;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto s = f.run(0.05, intervals[i]).summary;
    if (i > 0 && (s.average_saving < prev.average_saving || s.overall_pd < prev.overall_pd)) pass = false;
    prev = s;
    detail += fmt("interval %g: ", intervals[i]) + fmt("saving %.4f ", s.average_saving) +
              fmt("pd %.4f; ", s.overall_pd);
  }
  return {pass, detail + (pass ? "halving never lowers saving or pd" : "trend violated")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tierctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return harness::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("tiertune_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "grid.json") << R"({"pacc_fast":[2000,20000],"pacc_slow":[2000,20000],"pm_de":[0,20],
      "pm_pr":[0,20],"ai":[1,8],"hot_thr":[4,9],"fm_fractions":{"min":0.5,"max":1,"count":26}})";
  std::ofstream(dir / "w.json") << R"({"pacc_fast":20000,"pacc_slow":20000,"pm_de":20,"pm_pr":20,"ai":1,"hot_thr":4})";

  const auto d = [&](const char* n) { return (dir / n).string(); };
  int rc = 0;
  rc |= cli({"build-db", "--grid", d("grid.json"), "--db", d("a.db"), "--seed", "5"});
  rc |= cli({"build-db", "--grid", d("grid.json"), "--db", d("b.db"), "--seed", "5", "--threads", "1"});
  rc |= cli({"tune", "--target", d("w.json"), "--db", d("a.db"), "--seed", "5", "--out", d("t1")});
  rc |= cli({"tune", "--target", d("w.json"), "--db", d("a.db"), "--seed", "5", "--out", d("t2")});
  rc |= cli({"accuracy", "--target", d("w.json"), "--db", d("a.db"), "--out", d("a1.csv")});
  rc |= cli({"accuracy", "--target", d("w.json"), "--db", d("a.db"), "--out", d("a2.csv")});
  rc |= cli({"synth", "--target", d("w.json"), "--out", d("s1.json")});
  rc |= cli({"synth", "--target", d("w.json"), "--out", d("s2.json")});
  const bool bytes = rc == 0 && slurp(d("a.db")) == slurp(d("b.db")) &&
                     slurp(dir / "t1" / "trace.csv") == slurp(dir / "t2" / "trace.csv") &&
                     slurp(dir / "t1" / "summary.json") == slurp(dir / "t2" / "summary.json") &&
                     slurp(d("a1.csv")) == slurp(d("a2.csv")) && slurp(d("s1.json")) == slurp(d("s2.json"));

  const perfdb::Database db = perfdb::load(d("a.db"));
  perfdb::save(db, d("c.db"));
  const perfdb::Database again = perfdb::load(d("c.db"));
  const bool round_trip = db == again && !db.empty() && slurp(d("a.db")) == slurp(d("c.db"));

  std::vector<perfdb::ConfigVector> grid;
  for (const auto& r : db.records()) grid.push_back(r.config);
  perfdb::BuildOptions o;
  o.fm_fractions = {1.0, 0.8, 0.6};
  const bool par_serial = perfdb::build(grid, o).db == perfdb::build_serial(grid, o).db;
  const std::size_t records = db.size();
  fs::remove_all(dir);
  return {bytes && round_trip && par_serial,
          std::string("repeated CLI outputs ") + (bytes ? "byte-identical" : "DIFFER") + "; save/load of " +
              std::to_string(records) + " records " + (round_trip ? "deep-equal" : "NOT equal") +
              "; parallel build " + (par_serial ? "==" : "!=") + " serial"};
}

}  // namespace

int main() {
  report(1, "generator soundness", generator_soundness);
  report(2, "planner integer identities", planner_identities);
  report(3, "watermark state machine", watermark_machine);
  report(4, "exact nearest queries", exact_nearest);
  report(5, "self-consistency accuracy", accuracy);
  report(6, "closed-loop compliance", closed_loop);
  report(7, "tau monotonicity", tau_sweep);
  report(8, "cadence trade-off", cadence);
  report(9, "determinism and persistence", determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
