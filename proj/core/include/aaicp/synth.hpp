#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "aaicp/geometry.hpp"
#include "aaicp/point_cloud.hpp"

namespace aaicp {

struct MisalignSpec {
  double rotation_angle_deg = 0.0;    // [0, 180]
  double translation_distance = 0.0;  // meters, >= 0
  double noise_sigma = 0.0;           // meters, >= 0
  std::uint64_t seed = 0;
  std::optional<std::size_t> subsample_to;

  void validate() const;
};

struct Misalignment {
  PointCloud source;
  RigidTransform ground_truth;  // maps source back onto the input cloud
};

/// Rotates the cloud by exactly rotation_angle_deg about a uniformly random
/// axis through its centroid, shifts it by exactly translation_distance along a
/// uniformly random direction, then adds isotropic Gaussian noise. When
/// subsample_to is set the cloud is first reduced with subsample(). Output is a
/// pure function of (cloud, spec).
Misalignment random_misalign(const PointCloud& cloud, const MisalignSpec& spec);

/// Uniform sample of n points without replacement, in original order.
/// Throws std::invalid_argument if n exceeds the cloud size.
PointCloud subsample(const PointCloud& cloud, std::size_t n, std::uint64_t seed);

enum class ShapeKind { SphereIsh, TwoPlanes, BunnyProxy };

std::optional<ShapeKind> shape_from_name(std::string_view name);
std::string_view shape_name(ShapeKind kind);

/// Built-in test geometry with a rank-3 covariance, deterministic in seed.
///  - SphereIsh: unit sphere with radii jittered into [0.95, 1.05].
///  - TwoPlanes: two 2 m square patches, the second tilted 30 degrees and
///    lifted 0.5 m.
///  - BunnyProxy: union of ellipsoids (body, head, ears, tail, paws) about
///    0.16 m across, surface-sampled.
/// Throws std::invalid_argument for n < 10.
PointCloud make_test_shape(ShapeKind kind, std::size_t n, std::uint64_t seed);

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace aaicp
