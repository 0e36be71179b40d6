#pragma once

// Deliberately naive two-tier model used as a test oracle.  Every query is a
// linear scan and every reclaim picks victims one at a time, so it shares no
// code or data layout with the production simulator.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ref {

struct Page {
  bool fast = false;
  std::uint64_t count = 0;
  bool queued = false;
  bool tried = false;
};

struct Totals {
  std::uint64_t pacc_fast = 0, pacc_slow = 0, pm_pr = 0, pm_de = 0, failures = 0, direct = 0, ops = 0;
};

class Model {
 public:
  Model(std::uint64_t fast_cap, std::uint64_t slow_cap, std::uint64_t hot_thr, std::uint64_t low,
        std::uint64_t high, std::uint64_t min)
      : fast_cap_(fast_cap), slow_cap_(slow_cap), hot_(hot_thr), low_(low), high_(high), min_(min) {}

  void set_wm(std::uint64_t min, std::uint64_t low, std::uint64_t high) {
    min_ = min;
    low_ = low;
    high_ = high;
  }

  std::uint64_t fast_used() const {
    std::uint64_t n = 0;
    for (const auto& p : pages) n += p.fast ? 1 : 0;
    return n;
  }
  std::uint64_t slow_used() const { return pages.size() - fast_used(); }

  // One victim: fast page with the smallest (count, id).
  bool demote_one() {
    if (slow_used() >= slow_cap_) return false;
    std::size_t victim = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < pages.size(); ++i) {
      if (!pages[i].fast) continue;
      if (victim == std::numeric_limits<std::size_t>::max() || pages[i].count < pages[victim].count) victim = i;
    }
    if (victim == std::numeric_limits<std::size_t>::max()) return false;
    pages[victim].fast = false;
    ++t.pm_de;
    return true;
  }

  std::uint64_t bound() const {
    const std::uint64_t b = 2 * low_ - min_;
    return b < fast_cap_ ? b : fast_cap_;
  }

  void direct_reclaim(std::uint64_t incoming) {
    if (fast_used() + incoming <= bound()) return;
    ++t.direct;
    while (fast_used() + incoming > bound())
      if (!demote_one()) break;
  }

  void add(bool want_fast) {
    bool fast = want_fast;
    if (fast && fast_used() + 1 > bound()) {
      direct_reclaim(1);
      if (fast_used() + 1 > bound()) fast = false;
    }
    pages.push_back(Page{fast, 0, false, false});
    if (!fast && slow_used() > slow_cap_) throw std::runtime_error("slow full");
  }

  void access(std::size_t id, std::uint64_t ops) {
    Page& p = pages.at(id);
    ++p.count;
    t.ops += ops;
    if (p.fast) {
      ++t.pacc_fast;
    } else {
      ++t.pacc_slow;
      if (p.count >= hot_ && !p.queued && !p.tried) {
        p.queued = true;
        queue.push_back(id);
      }
    }
  }

  void promote() {
    for (std::size_t id : queue) {
      Page& p = pages[id];
      p.queued = false;
      p.tried = true;
      if (p.fast) continue;
      const std::uint64_t lim = low_ < fast_cap_ ? low_ : fast_cap_;
      if (fast_used() < lim) {
        p.fast = true;
        ++t.pm_pr;
      } else {
        ++t.failures;
      }
    }
    queue.clear();
  }

  void background() {
    if (fast_used() <= low_) return;
    while (fast_used() > high_)
      if (!demote_one()) break;
  }

  Totals tick() {
    Totals out = t;
    t = Totals{};
    for (auto& p : pages) {
      p.count = 0;
      p.tried = false;
    }
    return out;
  }

  std::vector<Page> pages;
  std::vector<std::size_t> queue;
  Totals t;

 private:
  std::uint64_t fast_cap_, slow_cap_, hot_, low_, high_, min_;
};

}  // namespace ref
