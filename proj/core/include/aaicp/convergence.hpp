#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aaicp/geometry.hpp"

namespace aaicp {

/// Stopping rule shared by the Picard and accelerated loops so their
/// iteration counts are comparable.
///
/// With 1-based evaluation count n and error trace e_1..e_n, the base test is
/// C(n): |e_n - e_{n-1}| < epsilon * e_{n-1} (Relative, the default, which is
/// how PCL applies its Euclidean fitness epsilon) or |e_n - e_{n-1}| < epsilon
/// (Absolute, in the error's own units). Changes at or below absolute_floor
/// always count, so a pair aligned down to round-off still terminates. A run stops once C holds for
/// `confirm_iterations` consecutive evaluations, or as soon as C holds while
/// n < early_exit_before (a near-static pair needs no confirmation). It also
/// stops when n reaches max_iterations.
enum class ErrorChange { Absolute, Relative };

struct ConvergenceCriteria {
  double epsilon = 1e-3;
  ErrorChange change = ErrorChange::Relative;
  double absolute_floor = 1e-18;  // error units; 1 nm RMS for the squared metric
  std::size_t max_iterations = 100;
  std::size_t confirm_iterations = 2;
  std::size_t early_exit_before = 4;
};

enum class ConvergenceDecision { Continue, Converged, IterationLimit };

/// C(n) for 1-based n; false for n < 2.
bool error_change_below(std::span<const double> errors, std::size_t n, double epsilon,
                        ErrorChange change = ErrorChange::Relative, double absolute_floor = 0.0);

/// Decision after errors.size() evaluations.
ConvergenceDecision check_convergence(std::span<const double> errors, const ConvergenceCriteria& criteria);

/// Per-run trace shared by both solvers.
struct RunRecord {
  Pose6 final_pose;
  std::size_t iterations = 0;     // number of G evaluations
  std::vector<double> errors;     // errors[k]: alignment error at iterates[k]
  std::vector<Pose6> iterates;    // poses at which G was evaluated, in order
  std::size_t reset_count = 0;
  bool converged = false;
  double wall_time_s = 0.0;

  // Accelerated runs only.
  std::vector<std::size_t> cursor_trace;           // history cut-off after each iteration
  std::vector<std::vector<double>> accepted_alphas;  // every combination taken, alpha_0 first

  double initial_error() const { return errors.empty() ? 0.0 : errors.front(); }
  double final_error() const { return errors.empty() ? 0.0 : errors.back(); }
};

}  // namespace aaicp
