#include "tiertune/tiersim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tiertune/error.hpp"

namespace tiertune::sim {

const char* to_string(Tier tier) noexcept { return tier == Tier::Fast ? "fast" : "slow"; }

void TierParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidParams, what); };
  if (fast_capacity < 1) fail("fast_capacity must be >= 1");
  if (slow_capacity < 1) fail("slow_capacity must be >= 1");
  if (!(lat_fast > 0.0) || !std::isfinite(lat_fast)) fail("lat_fast must be > 0");
  if (!(lat_slow >= lat_fast) || !std::isfinite(lat_slow)) fail("lat_slow must be >= lat_fast");
  if (!(mig_cost >= 0.0) || !std::isfinite(mig_cost)) fail("mig_cost must be >= 0");
  if (!(contention_beta >= 0.0) || !std::isfinite(contention_beta)) fail("contention_beta must be >= 0");
  if (!(direct_reclaim_penalty >= 0.0) || !std::isfinite(direct_reclaim_penalty))
    fail("direct_reclaim_penalty must be >= 0");
  if (!(ops_rate > 0.0) || !std::isfinite(ops_rate)) fail("ops_rate must be > 0");
}

Watermarks watermarks_for_target(std::uint64_t new_fm) noexcept {
  // round(0.8 * n) == floor((8n + 5) / 10)
  return Watermarks{(8 * new_fm + 5) / 10, new_fm, new_fm};
}

TieredMemState::TieredMemState(const TierParams& params, const StateConfig& config)
    : params_(params), config_(config) {
  params_.validate();
  if (config_.hot_thr < 2) throw Error(Errc::InvalidHotThr, "hot_thr must be >= 2");
  if (!(config_.prof_int > 0.0)) throw Error(Errc::InvalidParams, "prof_int must be > 0");
  wm_ = default_watermarks();
}

Watermarks TieredMemState::default_watermarks() const noexcept {
  const std::uint64_t cap = params_.fast_capacity;
  const std::uint64_t usable = cap > config_.free_page_thr ? cap - config_.free_page_thr : 0;
  return watermarks_for_target(usable);
}

std::uint64_t TieredMemState::direct_reclaim_bound() const noexcept {
  return std::min(params_.fast_capacity, 2 * wm_.low_wm - wm_.min_wm);
}

PageState TieredMemState::page(PageId id) const {
  if (id >= pages_.size()) throw Error(Errc::UnknownPage, "page " + std::to_string(id));
  const Slot& s = pages_[id];
  return PageState{id, s.tier, s.interval_count, s.lifetime_count};
}

PageId TieredMemState::add_page(Tier preferred) {
  Tier tier = preferred;
  if (tier == Tier::Fast) {
    const std::uint64_t limit = direct_reclaim_bound();
    if (fast_used_ + 1 > limit) direct_reclaim(1);
    if (fast_used_ + 1 > limit) tier = Tier::Slow;
  }
  if (tier == Tier::Slow && slow_used() >= params_.slow_capacity)
    throw Error(Errc::CapacityExceeded, "slow tier is full");
  const PageId id = pages_.size();
  pages_.push_back(Slot{tier, false, false, 0, 0});
  if (tier == Tier::Fast) ++fast_used_;
  check_conservation();
  return id;
}

double TieredMemState::access_page(PageId id, std::uint64_t ai_ops) {
  if (id >= pages_.size()) throw Error(Errc::UnknownPage, "page " + std::to_string(id));
  Slot& s = pages_[id];
  ++s.interval_count;
  ++s.lifetime_count;
  double latency;
  if (s.tier == Tier::Fast) {
    ++total_.pacc_fast;
    ++interval_.pacc_fast;
    latency = params_.lat_fast;
  } else {
    ++total_.pacc_slow;
    ++interval_.pacc_slow;
    latency = params_.lat_slow;
    if (s.interval_count >= config_.hot_thr && !s.queued && !s.attempted) {
      s.queued = true;
      queue_.push_back(id);
    }
  }
  total_.ops_executed += ai_ops;
  interval_.ops_executed += ai_ops;
  const double t = latency + static_cast<double>(ai_ops) / params_.ops_rate;
  total_.sim_time += t;
  interval_.sim_time += t;
  return t;
}

void TieredMemState::move_to(PageId id, Tier tier) {
  Slot& s = pages_[id];
  assert(s.tier != tier);
  s.tier = tier;
  if (tier == Tier::Fast)
    ++fast_used_;
  else
    --fast_used_;
}

void TieredMemState::charge_migration(bool promotion) {
  if (promotion) {
    ++total_.pm_pr;
    ++interval_.pm_pr;
  } else {
    ++total_.pm_de;
    ++interval_.pm_de;
  }
  total_.sim_time += params_.mig_cost;
  interval_.sim_time += params_.mig_cost;
}

std::uint64_t TieredMemState::run_promotion_queue() {
  std::uint64_t promoted = 0;
  const std::uint64_t limit = std::min(wm_.low_wm, params_.fast_capacity);
  for (PageId id : queue_) {
    Slot& s = pages_[id];
    s.queued = false;
    s.attempted = true;
    if (s.tier != Tier::Slow) continue;
    if (fast_used_ < limit) {
      move_to(id, Tier::Fast);
      charge_migration(true);
      ++promoted;
    } else {
      ++total_.mig_failures;
      ++interval_.mig_failures;
    }
  }
  queue_.clear();
  check_conservation();
  return promoted;
}

std::uint64_t TieredMemState::demote_coldest(std::uint64_t count) {
  const std::uint64_t slow_room = params_.slow_capacity - slow_used();
  count = std::min({count, fast_used_, slow_room});
  if (count == 0) return 0;

  std::vector<PageId> fast;
  fast.reserve(fast_used_);
  for (PageId id = 0; id < pages_.size(); ++id)
    if (pages_[id].tier == Tier::Fast) fast.push_back(id);

  auto colder = [this](PageId a, PageId b) {
    const auto ca = pages_[a].interval_count;
    const auto cb = pages_[b].interval_count;
    return ca != cb ? ca < cb : a < b;
  };
  if (count < fast.size())
    std::nth_element(fast.begin(), fast.begin() + static_cast<std::ptrdiff_t>(count), fast.end(), colder);
  std::sort(fast.begin(), fast.begin() + static_cast<std::ptrdiff_t>(count), colder);

  for (std::uint64_t i = 0; i < count; ++i) {
    move_to(fast[i], Tier::Slow);
    charge_migration(false);
  }
  return count;
}

std::uint64_t TieredMemState::background_reclaim() {
  if (fast_used_ <= wm_.low_wm) return 0;
  const std::uint64_t floor =
      wm_.high_wm > config_.reclaim_band ? wm_.high_wm - config_.reclaim_band : 0;
  const std::uint64_t demoted = demote_coldest(fast_used_ - floor);
  check_conservation();
  return demoted;
}

double TieredMemState::direct_reclaim(std::uint64_t incoming) {
  const std::uint64_t bound = direct_reclaim_bound();
  if (fast_used_ + incoming <= bound) return 0.0;
  const std::uint64_t demoted = demote_coldest(fast_used_ + incoming - bound);
  ++total_.direct_reclaims;
  ++interval_.direct_reclaims;
  const double t =
      params_.direct_reclaim_penalty + static_cast<double>(demoted) * params_.mig_cost;
  // charge_migration already billed mig_cost per page
  total_.sim_time += params_.direct_reclaim_penalty;
  interval_.sim_time += params_.direct_reclaim_penalty;
  check_conservation();
  return t;
}

Watermarks TieredMemState::set_fast_mem_target(std::uint64_t new_fm) {
  if (new_fm == 0 || new_fm > params_.fast_capacity)
    throw Error(Errc::InvalidTarget, "fast memory target " + std::to_string(new_fm) +
                                         " outside [1, " + std::to_string(params_.fast_capacity) + "]");
  wm_ = watermarks_for_target(new_fm);
  return wm_;
}

void TieredMemState::set_watermarks(const Watermarks& wm) {
  if (!(wm.min_wm <= wm.low_wm && wm.low_wm <= wm.high_wm && wm.high_wm <= params_.fast_capacity))
    throw Error(Errc::InvalidTarget, "watermarks must satisfy min <= low <= high <= capacity");
  wm_ = wm;
}

void TieredMemState::reset_page_counts() {
  for (Slot& s : pages_) {
    if (!config_.persist_access_counts) s.interval_count = 0;
    s.attempted = false;
  }
}

IntervalReport TieredMemState::interval_tick() {
  IntervalReport r;
  r.interval_index = interval_index_;
  r.fm_target = wm_.low_wm;
  r.pacc_fast = interval_.pacc_fast;
  r.pacc_slow = interval_.pacc_slow;
  r.pm_de = interval_.pm_de;
  r.pm_pr = interval_.pm_pr;
  r.mig_failures = interval_.mig_failures;
  r.direct_reclaims = interval_.direct_reclaims;
  r.ops_executed = interval_.ops_executed;
  r.sim_time = interval_.sim_time;
  r.exec_time = exec_time_model(r, params_);
  ++interval_index_;
  interval_ = Counters{};
  reset_page_counts();
  last_report_ = r;
  return r;
}

void TieredMemState::reset_interval() {
  interval_ = Counters{};
  reset_page_counts();
}

void TieredMemState::clear_pages() {
  pages_.clear();
  queue_.clear();
  fast_used_ = 0;
}

void TieredMemState::check_conservation() const {
  assert(fast_used_ <= pages_.size());
  assert(fast_used_ <= params_.fast_capacity);
  assert(slow_used() <= params_.slow_capacity);
}

void TieredMemState::audit() const {
  std::uint64_t fast = 0;
  for (const Slot& s : pages_)
    if (s.tier == Tier::Fast) ++fast;
  if (fast != fast_used_) throw std::logic_error("fast_used does not match page tiers");
  if (fast_used_ > params_.fast_capacity) throw std::logic_error("fast tier over capacity");
  if (slow_used() > params_.slow_capacity) throw std::logic_error("slow tier over capacity");
  for (PageId id : queue_) {
    if (id >= pages_.size() || !pages_[id].queued) throw std::logic_error("stale promotion queue entry");
  }
  if (!(wm_.min_wm <= wm_.low_wm && wm_.low_wm <= wm_.high_wm))
    throw std::logic_error("watermarks out of order");
}

}  // namespace tiertune::sim
