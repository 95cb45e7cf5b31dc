#include "aaicp/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace aaicp {
namespace {

Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
    const double norm = v.norm();
    if (norm > 1e-12) {
      return v / norm;
    }
  }
}

struct Ellipsoid {
  Eigen::Vector3d center;
  Eigen::Vector3d radii;

  bool contains(const Eigen::Vector3d& p) const {
    return (p - center).cwiseQuotient(radii).squaredNorm() < 1.0;
  }

  // Knud Thomsen's approximation.
  double surface_area() const {
    constexpr double k = 1.6075;
    const double ab = std::pow(radii.x() * radii.y(), k);
    const double ac = std::pow(radii.x() * radii.z(), k);
    const double bc = std::pow(radii.y() * radii.z(), k);
    return 4.0 * std::numbers::pi * std::pow((ab + ac + bc) / 3.0, 1.0 / k);
  }
};

PointCloud make_sphere(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.95, 1.05);
  PointCloud cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.push_back(random_unit_vector(rng) * radius(rng));
  }
  return cloud;
}

PointCloud make_two_planes(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const Eigen::Matrix3d tilt = Eigen::AngleAxisd(std::numbers::pi / 6.0, Eigen::Vector3d::UnitX()).toRotationMatrix();
  const Eigen::Vector3d lift(0.0, 0.0, 0.5);
  PointCloud cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d flat(coord(rng), coord(rng), 0.0);
    cloud.push_back(i % 2 == 0 ? flat : Eigen::Vector3d(tilt * flat + lift));
  }
  return cloud;
}

PointCloud make_bunny_proxy(std::size_t n, std::mt19937_64& rng) {
  const std::array<Ellipsoid, 7> parts = {{
      {{0.000, 0.045, 0.000}, {0.065, 0.045, 0.050}},   // body
      {{0.058, 0.088, 0.004}, {0.030, 0.027, 0.028}},   // head
      {{0.052, 0.134, 0.014}, {0.009, 0.032, 0.013}},   // left ear
      {{0.044, 0.128, -0.016}, {0.008, 0.028, 0.011}},  // right ear
      {{-0.068, 0.052, 0.004}, {0.013, 0.013, 0.013}},  // tail
      {{0.052, 0.008, 0.024}, {0.022, 0.009, 0.013}},   // front paw
      {{-0.030, 0.010, -0.035}, {0.030, 0.011, 0.015}}, // hind leg
  }};

  std::array<double, parts.size()> weights{};
  for (std::size_t k = 0; k < parts.size(); ++k) {
    weights[k] = parts[k].surface_area();
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  PointCloud cloud;
  cloud.reserve(n);
  while (cloud.size() < n) {
    const Ellipsoid& part = parts[pick(rng)];
    const Eigen::Vector3d p = part.center + random_unit_vector(rng).cwiseProduct(part.radii);
    bool hidden = false;
    for (const auto& other : parts) {
      if (&other != &part && other.contains(p)) {
        hidden = true;
        break;
      }
    }
    if (!hidden) {
      cloud.push_back(p);
    }
  }
  return cloud;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void MisalignSpec::validate() const {
  if (!(rotation_angle_deg >= 0.0 && rotation_angle_deg <= 180.0)) {
    throw std::invalid_argument("MisalignSpec: rotation angle must lie in [0, 180] degrees");
  }
  if (!(translation_distance >= 0.0) || !std::isfinite(translation_distance)) {
    throw std::invalid_argument("MisalignSpec: translation distance must be finite and >= 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("MisalignSpec: noise sigma must be finite and >= 0");
  }
}

Misalignment random_misalign(const PointCloud& cloud, const MisalignSpec& spec) {
  spec.validate();
  if (cloud.empty()) {
    throw std::invalid_argument("random_misalign: empty cloud");
  }
  const PointCloud base = spec.subsample_to ? subsample(cloud, *spec.subsample_to, mix_seed(spec.seed, 0)) : cloud;

  std::mt19937_64 rng(mix_seed(spec.seed, 1));
  const Eigen::Vector3d axis = random_unit_vector(rng);
  const Eigen::Vector3d direction = random_unit_vector(rng);
  const double angle = spec.rotation_angle_deg * std::numbers::pi / 180.0;

  // p -> R (p - c) + c + d
  RigidTransform forward;
  forward.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  const Eigen::Vector3d c = base.centroid();
  forward.translation = c - forward.rotation * c + spec.translation_distance * direction;

  Misalignment out;
  out.ground_truth = forward.inverse();
  if (spec.noise_sigma == 0.0) {
    out.source = apply_transform(forward, base);
    return out;
  }

  std::mt19937_64 noise_rng(mix_seed(spec.seed, 2));
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);
  PointCloud source;
  source.reserve(base.size());
  for (const auto& p : base) {
    source.push_back(forward.apply(p) + Eigen::Vector3d(noise(noise_rng), noise(noise_rng), noise(noise_rng)));
  }
  out.source = std::move(source);
  return out;
}

PointCloud subsample(const PointCloud& cloud, std::size_t n, std::uint64_t seed) {
  if (n > cloud.size()) {
    throw std::invalid_argument("subsample: requested " + std::to_string(n) + " of " +
                                std::to_string(cloud.size()) + " points");
  }
  // Selection sampling (Knuth, Algorithm S): each subset equally likely,
  // original order kept.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud out;
  out.reserve(n);
  std::size_t remaining = cloud.size();
  for (std::size_t i = 0; i < cloud.size() && out.size() < n; ++i, --remaining) {
    const std::size_t needed = n - out.size();
    if (static_cast<double>(remaining) * unit(rng) < static_cast<double>(needed)) {
      out.push_back(cloud[i]);
    }
  }
  return out;
}

std::optional<ShapeKind> shape_from_name(std::string_view name) {
  if (name == "sphere-ish") return ShapeKind::SphereIsh;
  if (name == "two-planes") return ShapeKind::TwoPlanes;
  if (name == "bunny-proxy") return ShapeKind::BunnyProxy;
  return std::nullopt;
}

std::string_view shape_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::SphereIsh:
      return "sphere-ish";
    case ShapeKind::TwoPlanes:
      return "two-planes";
    case ShapeKind::BunnyProxy:
      return "bunny-proxy";
  }
  return "unknown";
}

PointCloud make_test_shape(ShapeKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 10) {
    throw std::invalid_argument("make_test_shape: need at least 10 points");
  }
  std::mt19937_64 rng(seed);
  switch (kind) {
    case ShapeKind::SphereIsh:
      return make_sphere(n, rng);
    case ShapeKind::TwoPlanes:
      return make_two_planes(n, rng);
    case ShapeKind::BunnyProxy:
      return make_bunny_proxy(n, rng);
  }
  throw std::invalid_argument("make_test_shape: unknown shape");
}

}  // namespace aaicp
