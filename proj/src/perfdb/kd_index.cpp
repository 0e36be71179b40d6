#include <algorithm>
#include <limits>
#include <numeric>

#include "tiertune/perfdb.hpp"
#include "sqdist.hpp"

namespace tiertune::perfdb {

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

KdIndex::KdIndex(std::span<const Vec> points) : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t KdIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  // split on the widest dimension
  std::size_t dim = 0;
  double widest = -1.0;
  for (std::size_t d = 0; d < kDims; ++d) {
    double lo = points_[order_[begin]][d], hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      lo = std::min(lo, points_[order_[i]][d]);
      hi = std::max(hi, points_[order_[i]][d]);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      dim = d;
    }
  }
  if (!(widest > 0.0)) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][dim] < points_[b][dim]; });
  const double split = points_[order_[mid]][dim];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& n = nodes_[static_cast<std::size_t>(id)];
  n.dim = static_cast<std::uint8_t>(dim);
  n.split = split;
  n.left = left;
  n.right = right;
  return id;
}

void KdIndex::search(std::int32_t node, const Vec& q, double& best_d, std::size_t& best_i) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.left < 0) {
    for (std::uint32_t k = n.begin; k < n.end; ++k) {
      const std::uint32_t i = order_[k];
      const double d = detail::sqdist(points_[i], q);
      if (d < best_d || (d == best_d && i < best_i)) {
        best_d = d;
        best_i = i;
      }
    }
    return;
  }
  const double diff = q[n.dim] - n.split;
  const std::int32_t near = diff < 0.0 ? n.left : n.right;
  const std::int32_t far = diff < 0.0 ? n.right : n.left;
  search(near, q, best_d, best_i);
  // Equal bounds can still hide a lower-index tie, so only prune strictly.
  if (diff * diff <= best_d) search(far, q, best_d, best_i);
}

std::size_t KdIndex::nearest(const Vec& query, double* sq_distance) const {
  double best_d = std::numeric_limits<double>::infinity();
  std::size_t best_i = std::numeric_limits<std::size_t>::max();
  if (!nodes_.empty()) search(0, query, best_d, best_i);
  if (sq_distance != nullptr) *sq_distance = best_d;
  return best_i;
}

}  // namespace tiertune::perfdb
