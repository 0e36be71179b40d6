#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tiertune/error.hpp"
#include "tiertune/harness.hpp"
#include "tiertune/numfmt.hpp"
#include "tiertune/perfdb.hpp"
#include "tiertune/tuner.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::harness {

namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw Error(Errc::IoError, "write to " + path.string() + " failed");
}

// Writes to `path` when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty())
    body(out);
  else
    write_text(path, body);
}

struct Common {
  std::uint64_t seed = 0;
  std::string params_path;
  std::string mode = "guaranteed";

  sim::TierParams params() const {
    return params_path.empty() ? sim::TierParams{} : parse_params(read_text(params_path));
  }
  workgen::ShrinkMode shrink() const { return workgen::shrink_mode_from_string(mode); }
};

struct WorkloadArgs {
  std::string target_path;
  std::string spec_path;
  double ai_scale = 1.0;

  workgen::WorkloadSpec load(workgen::ShrinkMode mode) const {
    if (target_path.empty() == spec_path.empty())
      throw Error(Errc::InvalidParams, "give exactly one of --target or --spec");
    if (!spec_path.empty()) {
      if (ai_scale != 1.0) throw Error(Errc::InvalidParams, "--ai-scale needs --target");
      std::istringstream in(read_text(spec_path));
      return workgen::read_spec(in);
    }
    std::istringstream in(read_text(target_path));
    workgen::WorkloadTarget t = workgen::read_target(in);
    t.ai *= ai_scale;
    return workgen::synthesize(t, mode);
  }
};

std::string resolve_db(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TIERTUNE_DB"); env != nullptr && *env != '\0') return env;
  throw Error(Errc::InvalidParams, "no database given (--db or TIERTUNE_DB)");
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Seed recorded with outputs and used for grid sampling");
  cmd->add_option("--params", c.params_path, "JSON file with cost-model parameters");
  cmd->add_option("--mode", c.mode, "Capacity shrink mode")->check(CLI::IsMember({"guaranteed", "paper-literal"}));
}

void add_workload(CLI::App* cmd, WorkloadArgs& w) {
  cmd->add_option("--target", w.target_path, "Workload target JSON");
  cmd->add_option("--spec", w.spec_path, "Synthesized workload spec JSON");
}

nlohmann::ordered_json config_json(const perfdb::ConfigVector& c) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (double v : c.to_array()) a.push_back(v);
  return a;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return kExitIo;
  switch (err->code()) {
    case Errc::InfeasibleTarget:
    case Errc::InvalidHotThr:
    case Errc::CapacityExceeded:
    case Errc::EmptyDatabase:
    case Errc::DegenerateInterval:
      return kExitInfeasible;
    case Errc::IoError:
    case Errc::ParseError:
    case Errc::VersionError:
    case Errc::MalformedRecord:
      return kExitIo;
    case Errc::InvalidParams:
    case Errc::InvalidTarget:
    case Errc::UnknownPage:
      return kExitUsage;
  }
  return kExitIo;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tiered-memory simulation, database building and fast-memory tuning", "tierctl"};
  app.require_subcommand(1);

  Common common;
  WorkloadArgs work;
  std::string db_flag, out_path, grid_path, manifest_path, tuner_switch = "on", tuner_mode = "bidirectional";
  double fm_fraction = 1.0;
  std::vector<double> fm_fractions{0.99, 0.98, 0.97, 0.96, 0.95, 0.88, 0.85};
  int threads = 0;
  std::uint64_t horizon = 20;
  tuner::TunerConfig tcfg;

  auto* build = app.add_subcommand("build-db", "Measure a configuration grid into a database");
  add_common(build, common);
  build->add_option("--grid", grid_path, "Grid JSON")->required();
  build->add_option("--db", db_flag, "Output database (default $TIERTUNE_DB)");
  build->add_option("--manifest", manifest_path, "Write a JSON build manifest here");
  build->add_option("--threads", threads, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  auto* synth = app.add_subcommand("synth", "Plan a workload spec from a target");
  add_common(synth, common);
  synth->add_option("--target", work.target_path, "Workload target JSON")->required();
  synth->add_option("--out", out_path, "Output file (default stdout)");

  auto* run = app.add_subcommand("run", "Execute one episode and print its counters");
  add_common(run, common);
  add_workload(run, work);
  run->add_option("--fm-fraction", fm_fraction, "Fast-memory fraction in (0, 1]");
  run->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* tune = app.add_subcommand("tune", "Run the closed-loop tuner");
  add_common(tune, common);
  add_workload(tune, work);
  tune->add_option("--db", db_flag, "Database (default $TIERTUNE_DB)");
  tune->add_option("--tau", tcfg.tau, "Performance-loss target");
  tune->add_option("--interval", tcfg.interval, "Time-units between tuning steps");
  tune->add_option("--min-step", tcfg.min_step, "Ignore size changes below this many pages (0 = 1% of rss)");
  tune->add_option("--horizon", horizon, "Profiling intervals to run");
  tune->add_option("--tuner", tuner_switch, "Enable the tuner")->check(CLI::IsMember({"on", "off"}));
  tune->add_option("--tuner-mode", tuner_mode, "Resize direction")
      ->check(CLI::IsMember({"bidirectional", "decrease-only"}));
  tune->add_option("--out", out_path, "Directory for trace.csv and summary.json");

  auto* acc = app.add_subcommand("accuracy", "Compare database predictions with measured loss");
  add_common(acc, common);
  add_workload(acc, work);
  acc->add_option("--db", db_flag, "Database (default $TIERTUNE_DB)");
  acc->add_option("--fm-fractions", fm_fractions, "Fractions to evaluate")->delimiter(',');
  acc->add_option("--ai-scale", work.ai_scale, "Multiply the target's AI before running");
  acc->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const workgen::ShrinkMode mode = common.shrink();
    const sim::TierParams params = common.params();

    if (*build) {
      const auto t0 = std::chrono::steady_clock::now();
      const Grid grid = parse_grid(read_text(grid_path), common.seed);
      const std::string db_path = resolve_db(db_flag);
      perfdb::BuildOptions opts;
      opts.fm_fractions = grid.fm_fractions;
      opts.params = params;
      opts.seed = common.seed;
      opts.mode = mode;
      opts.threads = threads;
      const perfdb::BuildResult result = perfdb::build(grid.configs, opts);
      perfdb::save(result.db, db_path);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!manifest_path.empty()) {
        nlohmann::ordered_json m;
        m["database"] = db_path;
        m["seed"] = common.seed;
        m["mode"] = workgen::to_string(mode);
        m["configs"] = grid.configs.size();
        m["records"] = result.db.size();
        m["fm_fractions"] = opts.fm_fractions.size();
        m["skipped"] = nlohmann::ordered_json::array();
        for (const auto& s : result.skipped)
          m["skipped"].push_back({{"config", config_json(s.config)}, {"reason", s.reason}});
        m["wall_time_s"] = wall;
        write_text(manifest_path, [&](std::ostream& o) { o << m.dump(2) << '\n'; });
      }
      out << "records=" << result.db.size() << " skipped=" << result.skipped.size() << '\n';
      return kExitOk;
    }

    if (*synth) {
      const workgen::WorkloadSpec spec = work.load(mode);
      emit(out_path, out, [&](std::ostream& o) { workgen::write_spec(o, spec); });
      return kExitOk;
    }

    if (*run) {
      const workgen::WorkloadSpec spec = work.load(mode);
      sim::TieredMemState state = workgen::make_state(spec, params);
      const workgen::ExecResult r = workgen::execute(spec, state, fm_fraction);
      emit(out_path, out, [&](std::ostream& o) {
        sim::write_report_csv_header(o);
        sim::write_report_csv_row(o, r.report);
      });
      return kExitOk;
    }

    if (*tune) {
      tcfg.mode = tuner::tune_mode_from_string(tuner_mode);
      tcfg.validate();
      const workgen::WorkloadSpec spec = work.load(mode);
      const bool enabled = tuner_switch == "on";
      const perfdb::Database db = enabled ? perfdb::load(resolve_db(db_flag)) : perfdb::Database{};
      tuner::EpisodicStream stream(spec);
      tuner::LoopOptions lo;
      lo.cfg = tcfg;
      lo.horizon = horizon;
      lo.tuner_enabled = enabled;
      const tuner::TuneTrace trace = tuner::run_loop(stream, params, db, lo);
      if (!out_path.empty()) {
        fs::create_directories(out_path);
        write_text(fs::path(out_path) / "trace.csv", [&](std::ostream& o) { tuner::write_trace_csv(o, trace); });
        write_text(fs::path(out_path) / "summary.json",
                   [&](std::ostream& o) { tuner::write_summary_json(o, trace, tcfg, enabled); });
      }
      tuner::write_summary_json(out, trace, tcfg, enabled);
      return kExitOk;
    }

    if (*acc) {
      const workgen::WorkloadSpec spec = work.load(mode);
      const perfdb::Database db = perfdb::load(resolve_db(db_flag));
      const tuner::AccuracyReport report = tuner::evaluate_accuracy(spec, params, db, fm_fractions);
      emit(out_path, out, [&](std::ostream& o) { tuner::write_accuracy_csv(o, report); });
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "tierctl: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace tiertune::harness
