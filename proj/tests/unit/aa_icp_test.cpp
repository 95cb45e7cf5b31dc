#include "aaicp/aa_icp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "aaicp/icp.hpp"
#include "aaicp/synth.hpp"
#include "oracles.hpp"

namespace aaicp {
namespace {

AlphaSolution alphas(std::vector<double> a) {
  AlphaSolution s;
  s.alphas = std::move(a);
  return s;
}

struct Pair {
  PointCloud source;
  PointCloud reference;
};

Pair misaligned_pair(std::uint64_t seed, double degrees, std::size_t n = 1500) {
  const PointCloud base = make_test_shape(ShapeKind::BunnyProxy, 6000, 11);
  Pair p;
  p.reference = subsample(base, n, mix_seed(seed, 1));
  p.source = random_misalign(subsample(base, n, mix_seed(seed, 2)), {.rotation_angle_deg = degrees, .seed = seed}).source;
  return p;
}

void expect_invariants(const RunRecord& r, const AAConfig& cfg) {
  ASSERT_LE(r.iterations, cfg.convergence.max_iterations);
  ASSERT_EQ(r.errors.size(), r.iterations);
  ASSERT_EQ(r.iterates.size(), r.iterations);
  for (std::size_t k = 1; k < r.cursor_trace.size(); ++k) ASSERT_GE(r.cursor_trace[k], r.cursor_trace[k - 1]);
  for (const auto& a : r.accepted_alphas) {
    ASSERT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-12);
    ASSERT_GT(a[0], 0.0);
    for (double x : a) ASSERT_LE(std::abs(x), cfg.alpha_limit);
  }
  ASSERT_LE(r.final_error(), r.initial_error());
}

TEST(HeuristicReset, Boundary) {
  EXPECT_EQ(heuristic_reset(1.0, 1.0, 1.0), ResetDecision::Continue);
  EXPECT_EQ(heuristic_reset(0.9, 1.0, 1.0), ResetDecision::Continue);
  EXPECT_EQ(heuristic_reset(2.0, 1.0, 1.0), ResetDecision::Reset);
  EXPECT_EQ(heuristic_reset(1.05, 1.0, 1.1), ResetDecision::Continue);
}

TEST(HeuristicAlphaGuard, Examples) {
  EXPECT_EQ(heuristic_alpha_guard(alphas({0.5, 0.5}), 10), GuardDecision::Accept);
  EXPECT_EQ(heuristic_alpha_guard(alphas({-1, 2}), 10), GuardDecision::Reject);
  EXPECT_EQ(heuristic_alpha_guard(alphas({11, -10}), 10), GuardDecision::Reject);
  EXPECT_EQ(heuristic_alpha_guard(alphas({0.0, 1.0}), 10), GuardDecision::Reject);
  EXPECT_EQ(heuristic_alpha_guard(alphas({10, -10, 1}), 10), GuardDecision::Accept);
}

TEST(AAConfig, Validation) {
  AAConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha_limit = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.reset_slack = 0.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.convergence.epsilon = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.convergence.max_iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunAaIcp, AlignedCloudsMatchPicard) {
  const PointCloud cloud = make_test_shape(ShapeKind::BunnyProxy, 2000, 4);
  const RunRecord aa = run_aa_icp(cloud, cloud, Pose6::identity(), {});
  const RunRecord picard = run_picard(cloud, cloud, Pose6::identity(), {});
  EXPECT_TRUE(aa.converged);
  EXPECT_LE(aa.iterations, 3u);
  EXPECT_NEAR(aa.final_error(), picard.final_error(), 1e-9);
}

TEST(RunAaIcp, HistoryZeroIsPicardBitForBit) {
  AAConfig cfg;
  cfg.history = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Pair p = misaligned_pair(seed, 15);
    const IcpMapping g(p.source, p.reference);
    const RunRecord aa = run_aa_icp(g, Pose6::identity(), cfg);
    const RunRecord picard = run_picard(g, Pose6::identity(), cfg.convergence);
    EXPECT_EQ(aa.iterates, picard.iterates);
    EXPECT_EQ(aa.errors, picard.errors);
    EXPECT_EQ(aa.final_pose, picard.final_pose);
    EXPECT_TRUE(aa.accepted_alphas.empty());
  }
}

TEST(RunAaIcp, AcceleratesTypicalMisalignment) {
  const AAConfig cfg;
  int faster_or_equal = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Pair p = misaligned_pair(seed, 10);
    const IcpMapping g(p.source, p.reference);
    const RunRecord aa = run_aa_icp(g, Pose6::identity(), cfg);
    const RunRecord picard = run_picard(g, Pose6::identity(), cfg.convergence);
    expect_invariants(aa, cfg);
    EXPECT_TRUE(aa.converged);
    faster_or_equal += aa.iterations <= picard.iterations;
    EXPECT_FALSE(aa.accepted_alphas.empty());
  }
  EXPECT_GE(faster_or_equal, 6);
}

TEST(RunAaIcp, TwoClusterAdversarialPairTerminates) {
  // Two blobs of unequal size and shape; a large start rotation pairs much of
  // each blob with the wrong one, so the error landscape has two basins.
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 0.15);
  PointCloud ref;
  for (int i = 0; i < 400; ++i) ref.push_back(Point3(-1 + n(rng), n(rng), n(rng)));
  for (int i = 0; i < 250; ++i) ref.push_back(Point3(1 + 2 * n(rng), n(rng), 3 * n(rng)));
  AAConfig cfg;
  cfg.convergence.epsilon = 1e-6;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Misalignment m = random_misalign(ref, {.rotation_angle_deg = 100, .translation_distance = 0.3, .seed = seed});
    for (std::size_t history : {1u, 3u, 10u}) {
      cfg.history = history;
      const RunRecord r = run_aa_icp(m.source, ref, Pose6::identity(), cfg);
      expect_invariants(r, cfg);
      EXPECT_TRUE(std::isfinite(r.final_error()));
    }
  }
}

TEST(RunAaIcp, LargeRotationsKeepInvariants) {
  AAConfig cfg;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Pair p = misaligned_pair(seed, 60 + 15 * static_cast<double>(seed), 800);
    const RunRecord r = run_aa_icp(p.source, p.reference, Pose6::identity(), cfg);
    expect_invariants(r, cfg);
  }
}

TEST(RunAaIcp, ResetCursorTracksLatestReset) {
  AAConfig cfg;
  std::size_t total_resets = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Pair p = misaligned_pair(seed, 20, 1000);
    const RunRecord r = run_aa_icp(p.source, p.reference, Pose6::identity(), cfg);
    ASSERT_EQ(r.cursor_trace.size(), r.iterations);
    std::size_t jumps = 0;
    for (std::size_t k = 1; k < r.cursor_trace.size(); ++k) jumps += r.cursor_trace[k] != r.cursor_trace[k - 1];
    EXPECT_EQ(jumps, r.reset_count);
    total_resets += r.reset_count;
  }
  RecordProperty("resets", static_cast<int>(total_resets));
}

TEST(RunAaIcp, SingleIterationBudget) {
  AAConfig cfg;
  cfg.convergence.max_iterations = 1;
  const Pair p = misaligned_pair(1, 10, 500);
  const RunRecord r = run_aa_icp(p.source, p.reference, Pose6::identity(), cfg);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_FALSE(r.converged);
}

}  // namespace
}  // namespace aaicp
