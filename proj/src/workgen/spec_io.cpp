#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

#include "tiertune/error.hpp"
#include "tiertune/workgen.hpp"

namespace tiertune::workgen {

using nlohmann::json;

namespace {

json target_to_json(const WorkloadTarget& t) {
  return json{{"pacc_fast", t.pacc_fast},   {"pacc_slow", t.pacc_slow},
              {"pm_pr", t.pm_pr},           {"pm_de", t.pm_de},
              {"ai", t.ai},                 {"rss", t.rss},
              {"hot_thr", t.hot_thr},       {"free_page_thr", t.free_page_thr},
              {"prof_int", t.prof_int},     {"num_threads", t.num_threads}};
}

WorkloadTarget target_from_json(const json& j) {
  WorkloadTarget t;
  t.pacc_fast = j.at("pacc_fast").get<std::uint64_t>();
  t.pacc_slow = j.at("pacc_slow").get<std::uint64_t>();
  t.pm_pr = j.value("pm_pr", std::uint64_t{0});
  t.pm_de = j.value("pm_de", std::uint64_t{0});
  t.ai = j.value("ai", 0.0);
  t.rss = j.value("rss", std::uint64_t{0});
  t.hot_thr = j.value("hot_thr", std::uint64_t{2});
  t.free_page_thr = j.value("free_page_thr", std::uint64_t{0});
  t.prof_int = j.value("prof_int", 1.0);
  t.num_threads = j.value("num_threads", std::uint64_t{1});
  return t;
}

sim::Tier tier_from_string(const std::string& s) {
  if (s == "fast") return sim::Tier::Fast;
  if (s == "slow") return sim::Tier::Slow;
  throw Error(Errc::ParseError, "unknown tier '" + s + "'");
}

GroupKind kind_from_string(const std::string& s) {
  for (GroupKind k : {GroupKind::Demote, GroupKind::FastSteady, GroupKind::FastResidual,
                      GroupKind::Promote, GroupKind::SlowSteady, GroupKind::SlowResidual,
                      GroupKind::Cold})
    if (s == to_string(k)) return k;
  throw Error(Errc::ParseError, "unknown page group '" + s + "'");
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace

void write_target(std::ostream& out, const WorkloadTarget& target) {
  out << target_to_json(target).dump(2) << '\n';
}

WorkloadTarget read_target(std::istream& in) {
  const json j = parse_json(in);
  try {
    return target_from_json(j.contains("target") ? j.at("target") : j);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

void write_spec(std::ostream& out, const WorkloadSpec& spec) {
  json groups = json::array();
  for (const PageGroup& g : spec.page_groups)
    groups.push_back({{"kind", to_string(g.kind)},
                      {"tier", sim::to_string(g.tier)},
                      {"first_page", g.first_page},
                      {"pages", g.pages},
                      {"accesses_per_page", g.accesses_per_page}});

  // Streams as flat run-length lists: [page0, count0, page1, count1, ...]
  json streams = json::array();
  for (const auto& stream : spec.thread_streams) {
    json runs = json::array();
    for (const AccessRun& r : stream) {
      runs.push_back(r.page);
      runs.push_back(r.count);
    }
    streams.push_back(std::move(runs));
  }

  json j{{"version", spec.version},
         {"mode", to_string(spec.mode)},
         {"target", target_to_json(spec.target)},
         {"page_groups", std::move(groups)},
         {"plan",
          {{"np_fast", spec.np_fast},
           {"np_slow", spec.np_slow},
           {"promo_candidates", spec.promo_candidates},
           {"demo_candidates", spec.demo_candidates},
           {"ai_ops_per_access", spec.ai_ops_per_access}}},
         {"capacities",
          {{"init_fast", spec.init_fast_capacity},
           {"post_init", spec.post_init_capacity},
           {"slow", spec.slow_capacity}}},
         {"thread_streams", std::move(streams)}};
  out << j.dump(1) << '\n';
}

WorkloadSpec read_spec(std::istream& in) {
  const json j = parse_json(in);
  try {
    const int version = j.at("version").get<int>();
    if (version != kSpecVersion)
      throw Error(Errc::VersionError, "workload spec version " + std::to_string(version) +
                                          " is not supported");
    WorkloadSpec spec;
    spec.version = version;
    spec.mode = shrink_mode_from_string(j.at("mode").get<std::string>());
    spec.target = target_from_json(j.at("target"));
    for (const json& g : j.at("page_groups"))
      spec.page_groups.push_back(PageGroup{kind_from_string(g.at("kind").get<std::string>()),
                                           tier_from_string(g.at("tier").get<std::string>()),
                                           g.at("first_page").get<std::uint64_t>(),
                                           g.at("pages").get<std::uint64_t>(),
                                           g.at("accesses_per_page").get<std::uint64_t>()});
    const json& plan = j.at("plan");
    spec.np_fast = plan.at("np_fast").get<std::uint64_t>();
    spec.np_slow = plan.at("np_slow").get<std::uint64_t>();
    spec.promo_candidates = plan.at("promo_candidates").get<std::uint64_t>();
    spec.demo_candidates = plan.at("demo_candidates").get<std::uint64_t>();
    spec.ai_ops_per_access = plan.at("ai_ops_per_access").get<std::uint64_t>();
    const json& caps = j.at("capacities");
    spec.init_fast_capacity = caps.at("init_fast").get<std::uint64_t>();
    spec.post_init_capacity = caps.at("post_init").get<std::uint64_t>();
    spec.slow_capacity = caps.at("slow").get<std::uint64_t>();
    const std::uint64_t pages = spec.total_pages();
    for (const json& s : j.at("thread_streams")) {
      if (s.size() % 2 != 0) throw Error(Errc::ParseError, "odd-length run list in thread_streams");
      std::vector<AccessRun> runs;
      runs.reserve(s.size() / 2);
      for (std::size_t i = 0; i < s.size(); i += 2) {
        AccessRun r{s[i].get<std::uint64_t>(), s[i + 1].get<std::uint64_t>()};
        if (r.page >= pages) throw Error(Errc::ParseError, "stream references unknown page");
        runs.push_back(r);
      }
      spec.thread_streams.push_back(std::move(runs));
    }
    return spec;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace tiertune::workgen
