#pragma once

#include <cstddef>

#include "aaicp/anderson.hpp"
#include "aaicp/convergence.hpp"
#include "aaicp/icp.hpp"

namespace aaicp {

struct AAConfig {
  std::size_t history = 10;   // window limit m; 0 reduces the loop to Picard
  double alpha_limit = 10.0;  // bound on every |alpha_j|
  double reset_slack = 1.0;   // reset when e_n > e_{n-1} * reset_slack
  ConvergenceCriteria convergence;

  /// Throws std::invalid_argument unless alpha_limit > 0, epsilon > 0,
  /// reset_slack >= 1 and max_iterations >= 1.
  void validate() const;
};

enum class ResetDecision { Continue, Reset };
enum class GuardDecision { Accept, Reject };

/// Error-increase guard: Reset iff error_n > error_prev * slack.
ResetDecision heuristic_reset(double error_n, double error_prev, double slack);

/// Accept iff every |alpha_j| <= alpha_limit and alpha_0 > 0, i.e. the jump is
/// bounded and leans toward the most recent image.
GuardDecision heuristic_alpha_guard(const AlphaSolution& solution, double alpha_limit);

/// Anderson-accelerated ICP.
///
/// Each iteration evaluates g^n = G(u^n). If the error rose against the
/// previous iterate, the history is cut at n and the next iterate falls back to
/// g^{n-1}, the image of the last trusted pose. Otherwise the candidate is g^n
/// and the window grows i = 1, 2, ..., min(m, n - h); each window's
/// combination replaces the candidate while its weights pass the guard, and the
/// first rejection ends the search. The shared stopping rule is checked after
/// every evaluation.
///
/// When the fallback g^{n-1} equals u^n (no jump was taken into u^n),
/// evaluating it again would reproduce g^n exactly, so the loop continues from
/// g^n instead and only the history cut remains. With m = 0 this makes the
/// iterate sequence identical to run_picard.
///
/// The guard, cursor monotonicity and the n_max bound are checked on every
/// iteration; a violation throws std::logic_error.
RunRecord run_aa_icp(const IcpMapping& mapping, const Pose6& initial, const AAConfig& config);

RunRecord run_aa_icp(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                     const AAConfig& config, const IcpOptions& options = {});

}  // namespace aaicp
