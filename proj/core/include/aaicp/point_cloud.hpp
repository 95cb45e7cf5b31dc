#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "aaicp/geometry.hpp"

namespace aaicp {

using Point3 = Eigen::Vector3d;

/// Ordered set of 3D points in meters. Every stored coordinate is finite;
/// insertion of a NaN or infinity throws std::invalid_argument.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points);
  PointCloud(std::initializer_list<Point3> points);

  void push_back(const Point3& p);
  void reserve(std::size_t n) { points_.reserve(n); }

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const Point3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point3> points() const noexcept { return points_; }

  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  Point3 centroid() const;

  friend bool operator==(const PointCloud& a, const PointCloud& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point3> points_;
};

/// Each output point is R p + t; order and cardinality are preserved.
PointCloud apply_transform(const RigidTransform& transform, const PointCloud& cloud);

}  // namespace aaicp
