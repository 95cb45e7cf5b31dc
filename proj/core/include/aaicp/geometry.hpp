#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace aaicp {

using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Roto-translation as a 6-vector: translation in meters, Euler angles in
/// radians. Rotation convention is intrinsic Z-Y-X:
///   R = Rz(psi) * Ry(theta) * Rx(phi).
struct Pose6 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double phi = 0.0;    // roll, about x
  double theta = 0.0;  // pitch, about y
  double psi = 0.0;    // yaw, about z

  static Pose6 identity() { return {}; }
  static Pose6 from_vector(const Vector6& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

  Vector6 as_vector() const {
    Vector6 v;
    v << x, y, z, phi, theta, psi;
    return v;
  }

  bool is_finite() const;

  friend bool operator==(const Pose6&, const Pose6&) = default;
};

/// Proper rigid motion p -> R p + t.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return {}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;
  Eigen::Matrix4d matrix() const;
};

/// Result of splitting a rotation into Euler angles. `gimbal_lock` is set when
/// |theta| lies within 1e-6 of pi/2; phi is then pinned to 0 and the remaining
/// rotation folded into psi.
struct PoseDecomposition {
  Pose6 pose;
  bool gimbal_lock = false;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

Eigen::Matrix3d euler_to_rotation(double phi, double theta, double psi);

/// Throws std::invalid_argument on non-finite components.
RigidTransform pose_to_transform(const Pose6& pose);

PoseDecomposition decompose(const RigidTransform& transform);
Pose6 transform_to_pose(const RigidTransform& transform);

/// compose(a, b) = a * b: applying the result equals applying b, then a.
/// The rotation is projected back onto SO(3) when orthonormality drifts past
/// 1e-12.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

/// Largest absolute entry of R^T R - I.
double orthonormality_error(const Eigen::Matrix3d& rotation);

/// Rotation angle in [0, pi] recovered from the trace.
double rotation_angle(const Eigen::Matrix3d& rotation);

}  // namespace aaicp
