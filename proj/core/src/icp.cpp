#include "aaicp/icp.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aaicp/errors.hpp"

namespace aaicp {
namespace {

// Second singular value of the cross-covariance relative to the first; below
// this the pairs are treated as collinear.
constexpr double kRankTolerance = 1e-12;

}  // namespace

CorrespondenceSet find_correspondences(const PointCloud& source, const KdTree& index,
                                       std::optional<double> max_distance) {
  if (source.empty()) {
    throw std::invalid_argument("find_correspondences: empty source cloud");
  }
  CorrespondenceSet out;
  out.pairs.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Neighbor nn = index.nearest_one(source[i]);
    if (max_distance && nn.distance > *max_distance) {
      continue;
    }
    out.pairs.push_back({i, nn.index, nn.distance});
  }
  if (out.empty()) {
    throw NoOverlapError("find_correspondences: no pair within " + std::to_string(*max_distance) + " m");
  }
  return out;
}

double mean_error(const CorrespondenceSet& correspondences) {
  if (correspondences.empty()) {
    throw std::invalid_argument("mean_error: empty correspondence set");
  }
  double sum = 0.0;
  for (const auto& c : correspondences.pairs) {
    sum += c.distance;
  }
  return sum / static_cast<double>(correspondences.size());
}

double mean_squared_error(const CorrespondenceSet& correspondences) {
  if (correspondences.empty()) {
    throw std::invalid_argument("mean_squared_error: empty correspondence set");
  }
  double sum = 0.0;
  for (const auto& c : correspondences.pairs) {
    sum += c.distance * c.distance;
  }
  return sum / static_cast<double>(correspondences.size());
}

double alignment_error(const CorrespondenceSet& correspondences, ErrorMetric metric) {
  return metric == ErrorMetric::MeanDistance ? mean_error(correspondences) : mean_squared_error(correspondences);
}

RigidTransform estimate_rigid_transform(const PointCloud& source, const PointCloud& reference,
                                        const CorrespondenceSet& correspondences) {
  const std::size_t n = correspondences.size();
  if (n < 3) {
    throw DegenerateGeometryError("estimate_rigid_transform: need at least 3 correspondences, got " +
                                  std::to_string(n));
  }

  Eigen::Vector3d src_mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d ref_mean = Eigen::Vector3d::Zero();
  for (const auto& c : correspondences.pairs) {
    src_mean += source[c.source_index];
    ref_mean += reference[c.reference_index];
  }
  src_mean /= static_cast<double>(n);
  ref_mean /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  for (const auto& c : correspondences.pairs) {
    cross.noalias() += (source[c.source_index] - src_mean) * (reference[c.reference_index] - ref_mean).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[1] <= kRankTolerance * sv[0]) {
    throw DegenerateGeometryError("estimate_rigid_transform: collinear or coincident correspondences");
  }

  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Matrix3d sign = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0.0) {
    sign(2, 2) = -1.0;
  }

  RigidTransform out;
  out.rotation = v * sign * u.transpose();
  out.translation = ref_mean - out.rotation * src_mean;
  return out;
}

IcpStepResult icp_step(const PointCloud& source, const KdTree& index, const PointCloud& reference,
                       const Pose6& pose, const IcpOptions& options) {
  const RigidTransform current = pose_to_transform(pose);
  const PointCloud moved = apply_transform(current, source);
  const CorrespondenceSet pairs = find_correspondences(moved, index, options.max_correspondence_distance);
  const RigidTransform increment = estimate_rigid_transform(moved, reference, pairs);

  IcpStepResult out;
  out.next_pose = transform_to_pose(compose(increment, current));
  out.error = alignment_error(pairs, options.error_metric);
  out.correspondence_count = pairs.size();
  return out;
}

IcpMapping::IcpMapping(PointCloud source, PointCloud reference, IcpOptions options)
    : source_(std::move(source)), reference_(std::move(reference)), index_(reference_), options_(options) {
  if (source_.empty()) {
    throw std::invalid_argument("IcpMapping: empty source cloud");
  }
}

RunRecord run_picard(const IcpMapping& mapping, const Pose6& initial, const ConvergenceCriteria& criteria) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  Pose6 current = initial;

  auto decision = criteria.max_iterations == 0 ? ConvergenceDecision::IterationLimit : ConvergenceDecision::Continue;
  while (decision == ConvergenceDecision::Continue) {
    const IcpStepResult step = mapping(current);
    record.iterates.push_back(current);
    record.errors.push_back(step.error);
    current = step.next_pose;
    decision = check_convergence(record.errors, criteria);
  }

  record.final_pose = current;
  record.iterations = record.errors.size();
  record.converged = decision == ConvergenceDecision::Converged;
  record.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

RunRecord run_picard(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                     const ConvergenceCriteria& criteria, const IcpOptions& options) {
  return run_picard(IcpMapping(source, reference, options), initial, criteria);
}

}  // namespace aaicp
