#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aaicp/point_cloud.hpp"

namespace aaicp {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean, meters
};

/// Balanced k-d tree over a reference cloud: median split, axes cycled by
/// depth, buckets of at most `leaf_size` points.
///
/// nearest_one() is exact. Among equidistant reference points the lowest
/// index wins, so results match a brute-force scan bit for bit. The tree keeps
/// its own copy of the points and is immutable after construction; concurrent
/// queries are safe.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  explicit KdTree(const PointCloud& reference, std::size_t leaf_size = kDefaultLeafSize);

  Neighbor nearest_one(const Point3& query) const;

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t leaf_size() const noexcept { return leaf_size_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t depth() const noexcept { return depth_; }

 private:
  struct Node {
    // Leaf: [begin, end) into order_. Inner: split on `axis` at `split`,
    // children at `left` / `right`.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double split = 0.0;
    int axis = -1;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::size_t depth);
  void search(std::uint32_t node, const Point3& query, double& best_d2, std::size_t& best_index) const;

  std::vector<Point3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
  std::size_t depth_ = 0;
};

/// Builds the index; throws std::invalid_argument for an empty cloud.
KdTree build_index(const PointCloud& reference, std::size_t leaf_size = KdTree::kDefaultLeafSize);

}  // namespace aaicp
