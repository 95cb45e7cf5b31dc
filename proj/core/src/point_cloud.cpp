#include "aaicp/point_cloud.hpp"

#include <stdexcept>

namespace aaicp {
namespace {

void require_finite(const Point3& p) {
  if (!p.allFinite()) {
    throw std::invalid_argument("PointCloud: non-finite coordinate");
  }
}

}  // namespace

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    require_finite(p);
  }
}

PointCloud::PointCloud(std::initializer_list<Point3> points) : PointCloud(std::vector<Point3>(points)) {}

void PointCloud::push_back(const Point3& p) {
  require_finite(p);
  points_.push_back(p);
}

Point3 PointCloud::centroid() const {
  if (points_.empty()) {
    throw std::invalid_argument("PointCloud::centroid: empty cloud");
  }
  Point3 sum = Point3::Zero();
  for (const auto& p : points_) {
    sum += p;
  }
  return sum / static_cast<double>(points_.size());
}

PointCloud apply_transform(const RigidTransform& transform, const PointCloud& cloud) {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) {
    out.push_back(transform.apply(p));
  }
  return PointCloud(std::move(out));
}

}  // namespace aaicp
