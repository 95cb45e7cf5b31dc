#include <benchmark/benchmark.h>

#include <random>

#include "aaicp/aa_icp.hpp"
#include "aaicp/anderson.hpp"
#include "aaicp/icp.hpp"
#include "aaicp/kd_tree.hpp"
#include "aaicp/synth.hpp"

namespace {

using namespace aaicp;

const PointCloud& bunny() {
  static const PointCloud cloud = make_test_shape(ShapeKind::BunnyProxy, 20000, 1);
  return cloud;
}

struct Pair {
  PointCloud source;
  PointCloud reference;
};

Pair make_pair(std::size_t n, double degrees, std::uint64_t seed) {
  Pair p;
  p.reference = subsample(bunny(), n, mix_seed(seed, 1));
  p.source =
      random_misalign(subsample(bunny(), n, mix_seed(seed, 2)), {.rotation_angle_deg = degrees, .seed = seed}).source;
  return p;
}

void BM_KdTreeBuild(benchmark::State& state) {
  const PointCloud cloud = subsample(bunny(), static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_index(cloud).node_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KdTreeBuild)->Arg(1000)->Arg(3000)->Arg(20000);

void BM_KdTreeQuery(benchmark::State& state) {
  const KdTree tree = build_index(subsample(bunny(), static_cast<std::size_t>(state.range(0)), 3));
  const PointCloud queries = random_misalign(bunny(), {.rotation_angle_deg = 10, .seed = 4}).source;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.nearest_one(queries[i]));
    i = (i + 1) % queries.size();
  }
}
BENCHMARK(BM_KdTreeQuery)->Arg(3000)->Arg(20000);

void BM_IcpStep(benchmark::State& state) {
  const Pair p = make_pair(static_cast<std::size_t>(state.range(0)), 10, 5);
  const IcpMapping g(p.source, p.reference);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g(Pose6::identity()));
  }
}
BENCHMARK(BM_IcpStep)->Arg(1000)->Arg(3000)->Unit(benchmark::kMicrosecond);

void BM_SolveAlpha(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd f(6, state.range(0) + 1);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = n(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_alpha(f));
  }
}
BENCHMARK(BM_SolveAlpha)->DenseRange(1, 10, 3);

void BM_Picard(benchmark::State& state) {
  const Pair p = make_pair(3000, 10, 7);
  const IcpMapping g(p.source, p.reference);
  std::size_t iterations = 0;
  for (auto _ : state) {
    iterations = run_picard(g, Pose6::identity(), {}).iterations;
  }
  state.counters["icp_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_Picard)->Unit(benchmark::kMillisecond);

void BM_AaIcp(benchmark::State& state) {
  const Pair p = make_pair(3000, 10, 7);
  const IcpMapping g(p.source, p.reference);
  std::size_t iterations = 0;
  for (auto _ : state) {
    iterations = run_aa_icp(g, Pose6::identity(), {}).iterations;
  }
  state.counters["icp_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_AaIcp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
