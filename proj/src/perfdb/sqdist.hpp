#pragma once

#include "tiertune/perfdb.hpp"

namespace tiertune::perfdb::detail {

// Every search path sums in the same order so distances compare bit-exactly.
inline double sqdist(const Vec& a, const Vec& b) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < kDims; ++d) {
    const double e = a[d] - b[d];
    s += e * e;
  }
  return s;
}

}  // namespace tiertune::perfdb::detail
