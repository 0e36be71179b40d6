#include <algorithm>
#include <iterator>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "tiertune/error.hpp"
#include "tiertune/harness.hpp"

namespace tiertune::harness {

namespace {

using nlohmann::json;

constexpr const char* kDimNames[perfdb::kDims] = {"pm_de",    "pm_pr",   "ai",
                                                  "pacc_fast", "pacc_slow", "prof_int",
                                                  "hot_thr",  "free_page_thr", "num_threads"};
constexpr std::size_t kMaxConfigs = 10'000'000;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidParams, "grid: " + what); }

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be numeric");
  return v.get<double>();
}

std::vector<double> axis(const json& spec, const std::string& name) {
  std::vector<double> values;
  if (spec.is_array()) {
    for (const auto& v : spec) values.push_back(as_number(v, name));
  } else if (spec.is_object()) {
    for (const auto& [key, _] : spec.items())
      if (key != "min" && key != "max" && key != "count") bad(name + ": unknown range key '" + key + "'");
    if (!spec.contains("min") || !spec.contains("max") || !spec.contains("count"))
      bad(name + " range needs min, max and count");
    const double lo = as_number(spec["min"], name + ".min");
    const double hi = as_number(spec["max"], name + ".max");
    if (!spec["count"].is_number_unsigned() || spec["count"].get<std::uint64_t>() == 0)
      bad(name + ".count must be a positive integer");
    const auto count = spec["count"].get<std::uint64_t>();
    if (hi < lo) bad(name + ": max < min");
    for (std::uint64_t i = 0; i < count; ++i)
      values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  } else if (spec.is_number()) {
    values.push_back(spec.get<double>());
  } else {
    bad(name + " must be a list, a number or a {min,max,count} range");
  }
  if (values.empty()) bad(name + " has no values");
  return values;
}

}  // namespace

Grid parse_grid(const std::string& text, std::uint64_t seed) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  const perfdb::Vec defaults = perfdb::ConfigVector{}.to_array();
  std::vector<std::vector<double>> axes(perfdb::kDims);
  for (std::size_t d = 0; d < perfdb::kDims; ++d)
    axes[d] = j.contains(kDimNames[d]) ? axis(j[kDimNames[d]], kDimNames[d]) : std::vector<double>{defaults[d]};
  for (const auto& [key, _] : j.items()) {
    const bool known = key == "fm_fractions" || key == "sample" ||
                       std::find(std::begin(kDimNames), std::end(kDimNames), key) != std::end(kDimNames);
    if (!known) bad("unknown key '" + key + "'");
  }

  std::size_t total = 1;
  for (const auto& a : axes) {
    if (total > kMaxConfigs / a.size()) bad("more than " + std::to_string(kMaxConfigs) + " configurations");
    total *= a.size();
  }

  Grid grid;
  grid.configs.reserve(total);
  std::vector<std::size_t> idx(perfdb::kDims, 0);
  for (std::size_t n = 0; n < total; ++n) {
    perfdb::Vec v{};
    for (std::size_t d = 0; d < perfdb::kDims; ++d) v[d] = axes[d][idx[d]];
    grid.configs.push_back(perfdb::ConfigVector::from_array(v));
    for (std::size_t d = perfdb::kDims; d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }

  if (j.contains("sample")) {
    if (!j["sample"].is_number_unsigned()) bad("sample must be a non-negative integer");
    const auto n = j["sample"].get<std::uint64_t>();
    if (n < grid.configs.size()) {
      std::vector<perfdb::ConfigVector> picked;
      picked.reserve(n);
      std::mt19937_64 rng(seed);
      std::sample(grid.configs.begin(), grid.configs.end(), std::back_inserter(picked), n, rng);
      grid.configs = std::move(picked);
    }
  }

  if (j.contains("fm_fractions")) {
    grid.fm_fractions = axis(j["fm_fractions"], "fm_fractions");
    for (double f : grid.fm_fractions)
      if (!(f > 0.0 && f <= 1.0)) bad("fm_fractions must lie in (0, 1]");
    if (std::find(grid.fm_fractions.begin(), grid.fm_fractions.end(), 1.0) == grid.fm_fractions.end())
      grid.fm_fractions.push_back(1.0);
  } else {
    grid.fm_fractions = perfdb::default_fm_fractions();
  }
  return grid;
}

sim::TierParams parse_params(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParams, std::string("params: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidParams, "params: top level must be an object");
  sim::TierParams p;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw Error(Errc::InvalidParams, "params: " + key + " must be numeric");
    const double v = value.get<double>();
    if (key == "lat_fast") p.lat_fast = v;
    else if (key == "lat_slow") p.lat_slow = v;
    else if (key == "mig_cost") p.mig_cost = v;
    else if (key == "contention_beta") p.contention_beta = v;
    else if (key == "direct_reclaim_penalty") p.direct_reclaim_penalty = v;
    else if (key == "ops_rate") p.ops_rate = v;
    else throw Error(Errc::InvalidParams, "params: unknown key '" + key + "'");
  }
  p.validate();
  return p;
}

}  // namespace tiertune::harness
