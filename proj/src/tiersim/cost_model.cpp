#include <algorithm>

#include "tiertune/tiersim.hpp"

namespace tiertune::sim {

double exec_time_model(const IntervalReport& c, const TierParams& p) noexcept {
  const double accesses = static_cast<double>(c.accesses());
  const double migrations = static_cast<double>(c.migrations());
  const double mig_ratio = migrations / std::max(1.0, accesses);
  const double compute = static_cast<double>(c.ops_executed) / p.ops_rate;
  const double memory = static_cast<double>(c.pacc_fast) * p.lat_fast +
                        static_cast<double>(c.pacc_slow) * p.lat_slow;
  return compute + memory * (1.0 + p.contention_beta * mig_ratio) + migrations * p.mig_cost +
         static_cast<double>(c.direct_reclaims) * p.direct_reclaim_penalty;
}

}  // namespace tiertune::sim
