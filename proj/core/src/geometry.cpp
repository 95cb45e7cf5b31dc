#include "aaicp/geometry.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aaicp {
namespace {

constexpr double kGimbalTolerance = 1e-6;
constexpr double kDriftTolerance = 1e-12;

Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

}  // namespace

bool Pose6::is_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(phi) &&
         std::isfinite(theta) && std::isfinite(psi);
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

double normalize_angle(double radians) {
  constexpr double pi = std::numbers::pi;
  if (radians > -pi && radians <= pi) {
    return radians;
  }
  double wrapped = std::remainder(radians, 2.0 * pi);
  if (wrapped <= -pi) {
    wrapped += 2.0 * pi;
  }
  return wrapped;
}

Eigen::Matrix3d euler_to_rotation(double phi, double theta, double psi) {
  const double cx = std::cos(phi), sx = std::sin(phi);
  const double cy = std::cos(theta), sy = std::sin(theta);
  const double cz = std::cos(psi), sz = std::sin(psi);
  Eigen::Matrix3d r;
  r << cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx,
       sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx,
       -sy,     cy * sx,                cy * cx;
  return r;
}

RigidTransform pose_to_transform(const Pose6& pose) {
  if (!pose.is_finite()) {
    throw std::invalid_argument("pose_to_transform: non-finite pose component");
  }
  RigidTransform t;
  t.rotation = euler_to_rotation(pose.phi, pose.theta, pose.psi);
  t.translation = Eigen::Vector3d(pose.x, pose.y, pose.z);
  return t;
}

PoseDecomposition decompose(const RigidTransform& transform) {
  const Eigen::Matrix3d& r = transform.rotation;
  PoseDecomposition out;
  out.pose.x = transform.translation.x();
  out.pose.y = transform.translation.y();
  out.pose.z = transform.translation.z();

  const double cos_theta = std::hypot(r(0, 0), r(1, 0));
  out.pose.theta = std::atan2(-r(2, 0), cos_theta);
  if (cos_theta < std::sin(kGimbalTolerance)) {
    out.gimbal_lock = true;
    out.pose.phi = 0.0;
    out.pose.psi = normalize_angle(std::atan2(-r(0, 1), r(1, 1)));
  } else {
    out.pose.phi = normalize_angle(std::atan2(r(2, 1), r(2, 2)));
    out.pose.psi = normalize_angle(std::atan2(r(1, 0), r(0, 0)));
  }
  return out;
}

Pose6 transform_to_pose(const RigidTransform& transform) { return decompose(transform).pose; }

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  if (orthonormality_error(out.rotation) > kDriftTolerance) {
    out.rotation = project_to_rotation(out.rotation);
  }
  return out;
}

double orthonormality_error(const Eigen::Matrix3d& rotation) {
  return (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

double rotation_angle(const Eigen::Matrix3d& rotation) {
  // acos loses precision near 0 and pi; atan2 of |axis * sin| and cos does not.
  const Eigen::Vector3d skew(rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                             rotation(1, 0) - rotation(0, 1));
  const double sin_part = 0.5 * skew.norm();
  const double cos_part = 0.5 * (rotation.trace() - 1.0);
  return std::atan2(sin_part, cos_part);
}

}  // namespace aaicp
