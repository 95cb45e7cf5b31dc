#include "aaicp/convergence.hpp"

#include <cmath>

namespace aaicp {

bool error_change_below(std::span<const double> errors, std::size_t n, double epsilon, ErrorChange change,
                        double absolute_floor) {
  if (n < 2 || n > errors.size()) {
    return false;
  }
  const double delta = std::abs(errors[n - 1] - errors[n - 2]);
  const double scale = change == ErrorChange::Relative ? errors[n - 2] : 1.0;
  return delta < epsilon * scale || delta <= absolute_floor;
}

ConvergenceDecision check_convergence(std::span<const double> errors, const ConvergenceCriteria& criteria) {
  const std::size_t n = errors.size();
  if (error_change_below(errors, n, criteria.epsilon, criteria.change, criteria.absolute_floor)) {
    if (n < criteria.early_exit_before) {
      return ConvergenceDecision::Converged;
    }
    bool confirmed = true;
    for (std::size_t k = 1; k < criteria.confirm_iterations && confirmed; ++k) {
      confirmed = k < n && error_change_below(errors, n - k, criteria.epsilon, criteria.change,
                                              criteria.absolute_floor);
    }
    if (confirmed) {
      return ConvergenceDecision::Converged;
    }
  }
  if (n >= criteria.max_iterations) {
    return ConvergenceDecision::IterationLimit;
  }
  return ConvergenceDecision::Continue;
}

}  // namespace aaicp
