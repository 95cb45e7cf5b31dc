#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aaicp/convergence.hpp"
#include "aaicp/geometry.hpp"
#include "aaicp/kd_tree.hpp"
#include "aaicp/point_cloud.hpp"

namespace aaicp {

struct Correspondence {
  std::size_t source_index = 0;
  std::size_t reference_index = 0;
  double distance = 0.0;
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
};

/// Per-step alignment error reported by G.
///  - MeanSquaredDistance: the quantity the closed-form fit minimizes, so a
///    plain ICP step never increases it. This is the fitness PCL reports.
///  - MeanDistance: arithmetic mean of the pair distances.
enum class ErrorMetric { MeanSquaredDistance, MeanDistance };

struct IcpOptions {
  /// Pairs farther apart than this are dropped. Unset keeps every pair.
  std::optional<double> max_correspondence_distance;
  ErrorMetric error_metric = ErrorMetric::MeanSquaredDistance;
};

/// One evaluation of the ICP mapping: next_pose = G(u), plus the alignment
/// error measured at u (before the update).
struct IcpStepResult {
  Pose6 next_pose;
  double error = 0.0;
  std::size_t correspondence_count = 0;
};

/// Nearest reference point for every source point. Throws NoOverlapError when
/// the cutoff removes every pair.
CorrespondenceSet find_correspondences(const PointCloud& source, const KdTree& index,
                                       std::optional<double> max_distance = std::nullopt);

/// Arithmetic mean of the pair distances; throws std::invalid_argument if empty.
double mean_error(const CorrespondenceSet& correspondences);

/// Mean of the squared pair distances; throws std::invalid_argument if empty.
double mean_squared_error(const CorrespondenceSet& correspondences);

double alignment_error(const CorrespondenceSet& correspondences, ErrorMetric metric);

/// Least-squares proper rigid transform taking paired source points onto their
/// reference partners (centroids removed, SVD of the 3x3 cross-covariance with
/// a determinant sign fix). Throws DegenerateGeometryError for fewer than 3
/// pairs or collinear/coincident geometry.
RigidTransform estimate_rigid_transform(const PointCloud& source, const PointCloud& reference,
                                        const CorrespondenceSet& correspondences);

/// G(u): move the source by u, match, fit the increment, and compose it on the
/// left of u.
IcpStepResult icp_step(const PointCloud& source, const KdTree& index, const PointCloud& reference,
                       const Pose6& pose, const IcpOptions& options = {});

/// Owns a source cloud and an index over the reference, and exposes G as a
/// callable. Immutable once built; safe to share across threads.
class IcpMapping {
 public:
  IcpMapping(PointCloud source, PointCloud reference, IcpOptions options = {});

  IcpStepResult operator()(const Pose6& pose) const {
    return icp_step(source_, index_, reference_, pose, options_);
  }

  const PointCloud& source() const noexcept { return source_; }
  const PointCloud& reference() const noexcept { return reference_; }
  const KdTree& index() const noexcept { return index_; }

 private:
  PointCloud source_;
  PointCloud reference_;
  KdTree index_;
  IcpOptions options_;
};

/// Plain fixed-point iteration u <- G(u) under the shared stopping rule.
/// final_pose is the image of the last evaluated iterate.
RunRecord run_picard(const IcpMapping& mapping, const Pose6& initial, const ConvergenceCriteria& criteria);

RunRecord run_picard(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                     const ConvergenceCriteria& criteria, const IcpOptions& options = {});

}  // namespace aaicp
