#include "aaicp/aa_icp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aaicp {

void AAConfig::validate() const {
  if (!(alpha_limit > 0.0)) throw std::invalid_argument("AAConfig: alpha_limit must be positive");
  if (!(convergence.epsilon > 0.0)) throw std::invalid_argument("AAConfig: epsilon must be positive");
  if (!(reset_slack >= 1.0)) throw std::invalid_argument("AAConfig: reset_slack must be >= 1");
  if (convergence.max_iterations < 1) throw std::invalid_argument("AAConfig: max_iterations must be >= 1");
}

ResetDecision heuristic_reset(double error_n, double error_prev, double slack) {
  return error_n > error_prev * slack ? ResetDecision::Reset : ResetDecision::Continue;
}

GuardDecision heuristic_alpha_guard(const AlphaSolution& solution, double alpha_limit) {
  if (solution.alphas.empty() || !(solution.alphas.front() > 0.0)) {
    return GuardDecision::Reject;
  }
  const bool bounded = std::all_of(solution.alphas.begin(), solution.alphas.end(),
                                   [alpha_limit](double a) { return std::abs(a) <= alpha_limit; });
  return bounded ? GuardDecision::Accept : GuardDecision::Reject;
}

RunRecord run_aa_icp(const IcpMapping& mapping, const Pose6& initial, const AAConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const ConvergenceCriteria& criteria = config.convergence;

  RunRecord record;
  AAHistory history(config.history);

  auto evaluate = [&](const Pose6& u) {
    const IcpStepResult step = mapping(u);
    record.iterates.push_back(u);
    record.errors.push_back(step.error);
    history.push(u.as_vector(), step.next_pose.as_vector(), step.error);
    return step;
  };

  Pose6 next = evaluate(initial).next_pose;
  Pose6 previous_image = next;
  record.cursor_trace.push_back(history.cursor());
  ConvergenceDecision decision = check_convergence(record.errors, criteria);

  for (std::size_t n = 1; decision == ConvergenceDecision::Continue; ++n) {
    const Pose6 current = next;
    const IcpStepResult step = evaluate(current);
    const std::size_t cursor_before = history.cursor();

    if (heuristic_reset(step.error, record.errors[n - 1], config.reset_slack) == ResetDecision::Reset) {
      ++record.reset_count;
      history.reset_cursor(n);
      next = previous_image == current ? step.next_pose : previous_image;
    } else {
      VectorX candidate = history.recent(0).g;
      const std::size_t max_window = history.usable_window();
      for (std::size_t window = 1; window <= max_window; ++window) {
        AlphaSolution alpha = solve_alpha(history.residual_matrix(window));
        if (heuristic_alpha_guard(alpha, config.alpha_limit) == GuardDecision::Reject) {
          break;
        }
        candidate = combine_images(history, alpha);
        record.accepted_alphas.push_back(std::move(alpha.alphas));
      }
      next = Pose6::from_vector(candidate);
    }

    previous_image = step.next_pose;

    if (history.cursor() < cursor_before) {
      throw std::logic_error("run_aa_icp: history cursor moved backwards");
    }
    record.cursor_trace.push_back(history.cursor());
    decision = check_convergence(record.errors, criteria);
  }

  if (record.errors.size() > criteria.max_iterations) {
    throw std::logic_error("run_aa_icp: exceeded the iteration cap");
  }
  for (const auto& alphas : record.accepted_alphas) {
    if (heuristic_alpha_guard(AlphaSolution{alphas, 0.0}, config.alpha_limit) != GuardDecision::Accept) {
      throw std::logic_error("run_aa_icp: accepted weights violate the guard");
    }
  }

  record.final_pose = next;
  record.iterations = record.errors.size();
  record.converged = decision == ConvergenceDecision::Converged;
  record.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

RunRecord run_aa_icp(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                     const AAConfig& config, const IcpOptions& options) {
  return run_aa_icp(IcpMapping(source, reference, options), initial, config);
}

}  // namespace aaicp
