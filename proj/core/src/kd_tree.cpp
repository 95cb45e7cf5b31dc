#include "aaicp/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace aaicp {

KdTree::KdTree(const PointCloud& reference, std::size_t leaf_size)
    : points_(reference.begin(), reference.end()), leaf_size_(leaf_size) {
  if (points_.empty()) {
    throw std::invalid_argument("KdTree: reference cloud is empty");
  }
  if (leaf_size_ == 0) {
    throw std::invalid_argument("KdTree: leaf_size must be positive");
  }
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("KdTree: cloud too large");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * (points_.size() / leaf_size_ + 1));
  build(0, static_cast<std::uint32_t>(points_.size()), 0);
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t depth) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  depth_ = std::max(depth_, depth);

  if (end - begin <= leaf_size_) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  const int axis = static_cast<int>(depth % 3);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  // Everything in [begin, mid) is <= split and everything in [mid, end) is
  // >= split, which is what makes the pruning test below exact.
  const double split = points_[order_[mid]][axis];

  const std::uint32_t left = build(begin, mid, depth + 1);
  const std::uint32_t right = build(mid, end, depth + 1);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  node.begin = begin;
  node.end = end;
  return id;
}

void KdTree::search(std::uint32_t id, const Point3& query, double& best_d2, std::size_t& best_index) const {
  const Node& node = nodes_[id];
  if (node.axis < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const std::uint32_t idx = order_[k];
      const double d2 = (points_[idx] - query).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && idx < best_index)) {
        best_d2 = d2;
        best_index = idx;
      }
    }
    return;
  }

  const double diff = query[node.axis] - node.split;
  const std::uint32_t near = diff < 0.0 ? node.left : node.right;
  const std::uint32_t far = diff < 0.0 ? node.right : node.left;
  search(near, query, best_d2, best_index);
  // Ties must still be visited: an equidistant point with a lower index may
  // live on the far side.
  if (diff * diff <= best_d2) {
    search(far, query, best_d2, best_index);
  }
}

Neighbor KdTree::nearest_one(const Point3& query) const {
  if (!query.allFinite()) {
    throw std::invalid_argument("KdTree::nearest_one: non-finite query");
  }
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  search(0, query, best_d2, best_index);
  return {best_index, std::sqrt(best_d2)};
}

KdTree build_index(const PointCloud& reference, std::size_t leaf_size) { return KdTree(reference, leaf_size); }

}  // namespace aaicp
