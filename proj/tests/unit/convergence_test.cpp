#include "aaicp/convergence.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace aaicp {
namespace {

ConvergenceCriteria absolute(double eps) {
  ConvergenceCriteria c;
  c.epsilon = eps;
  c.change = ErrorChange::Absolute;
  return c;
}

TEST(ErrorChangeBelow, NeedsTwoErrors) {
  const std::vector<double> e{1.0};
  EXPECT_FALSE(error_change_below(e, 1, 1.0));
}

TEST(ErrorChangeBelow, AbsoluteAndRelative) {
  const std::vector<double> e{2.0, 1.999};
  EXPECT_TRUE(error_change_below(e, 2, 0.01, ErrorChange::Absolute));
  EXPECT_FALSE(error_change_below(e, 2, 0.0001, ErrorChange::Absolute));
  EXPECT_TRUE(error_change_below(e, 2, 0.001, ErrorChange::Relative));
  EXPECT_FALSE(error_change_below(e, 2, 0.0004, ErrorChange::Relative));
}

TEST(ErrorChangeBelow, RelativeAtZeroError) {
  const std::vector<double> e{0.0, 0.0};
  EXPECT_TRUE(error_change_below(e, 2, 1e-3));
}

TEST(ErrorChangeBelow, AbsoluteFloor) {
  const std::vector<double> e{0.0, 1e-34};
  EXPECT_FALSE(error_change_below(e, 2, 1e-3));
  EXPECT_TRUE(error_change_below(e, 2, 1e-3, ErrorChange::Relative, 1e-18));
}

TEST(CheckConvergence, RoundOffLevelErrorsConverge) {
  const std::vector<double> e{0.0, 1.8e-34, 3e-35, 2e-34};
  EXPECT_EQ(check_convergence(std::span(e).first(2), ConvergenceCriteria{}), ConvergenceDecision::Converged);
}

TEST(CheckConvergence, EarlyStopWithoutConfirmation) {
  const std::vector<double> e{0.5, 0.5000001};
  EXPECT_EQ(check_convergence(e, absolute(0.001)), ConvergenceDecision::Converged);
}

TEST(CheckConvergence, FirstEvaluationContinues) {
  const std::vector<double> e{0.5};
  EXPECT_EQ(check_convergence(e, absolute(0.001)), ConvergenceDecision::Continue);
}

TEST(CheckConvergence, TwoInARowAfterEarlyWindow) {
  // Big steps until n = 6, C(7) true, C(8) true.
  const std::vector<double> e{10, 8, 6, 4, 2, 1, 1.0005, 1.0009};
  const ConvergenceCriteria c = absolute(0.001);
  EXPECT_EQ(check_convergence(std::span(e).first(6), c), ConvergenceDecision::Continue);
  EXPECT_EQ(check_convergence(std::span(e).first(7), c), ConvergenceDecision::Continue);
  EXPECT_EQ(check_convergence(e, c), ConvergenceDecision::Converged);
}

TEST(CheckConvergence, IsolatedHitLaterDoesNotStop) {
  const std::vector<double> e{10, 8, 6, 4, 4.0001, 3, 2};
  const ConvergenceCriteria c = absolute(0.001);
  for (std::size_t n = 1; n <= e.size(); ++n) {
    EXPECT_EQ(check_convergence(std::span(e).first(n), c), ConvergenceDecision::Continue) << n;
  }
}

TEST(CheckConvergence, OscillationStopsAtCap) {
  std::vector<double> e;
  const ConvergenceCriteria c = absolute(0.001);
  for (std::size_t n = 1; n <= 100; ++n) {
    e.push_back(n % 2 ? 1.0 : 2.0);
    const ConvergenceDecision d = check_convergence(e, c);
    if (n < 100) {
      ASSERT_EQ(d, ConvergenceDecision::Continue);
    } else {
      EXPECT_EQ(d, ConvergenceDecision::IterationLimit);
    }
  }
}

TEST(CheckConvergence, ConvergenceWinsOverCapOnTheSameStep) {
  ConvergenceCriteria c = absolute(0.001);
  c.max_iterations = 2;
  const std::vector<double> e{1.0, 1.0};
  EXPECT_EQ(check_convergence(e, c), ConvergenceDecision::Converged);
}

}  // namespace
}  // namespace aaicp
