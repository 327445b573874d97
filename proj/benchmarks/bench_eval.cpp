// Evaluation hot paths: optimal cluster assignment and the full clustering
// report (indices plus Davies-Bouldin).

#include <benchmark/benchmark.h>

#include <vector>

#include "pairclust/eval.hpp"
#include "pairclust/rng.hpp"

using namespace pairclust;

namespace {

eval::ContingencyTable random_table(size_t labels, size_t clusters, uint64_t seed) {
  Rng rng(seed);
  eval::ContingencyTable t(labels, clusters);
  for (size_t i = 0; i < labels; ++i)
    for (size_t j = 0; j < clusters; ++j) t.at(i, j) = (long long)rng.uniform_below(50);
  return t;
}

void BM_hungarian_assign(benchmark::State& state) {
  const size_t n = size_t(state.range(0));
  const auto t = random_table(n, n, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::hungarian_assign(t));
  }
}
BENCHMARK(BM_hungarian_assign)->Arg(4)->Arg(20)->Arg(100);

void BM_ami(benchmark::State& state) {
  const size_t n = size_t(state.range(0));
  const auto t = random_table(n, n, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::ami(t));
  }
}
BENCHMARK(BM_ami)->Arg(4)->Arg(20);

void BM_report(benchmark::State& state) {
  const size_t points = size_t(state.range(0));
  const size_t K = 4;
  Rng rng(11);
  std::vector<int> gold(points), pred(points);
  std::vector<std::vector<double>> dists(points, std::vector<double>(K));
  for (size_t i = 0; i < points; ++i) {
    gold[i] = int(rng.uniform_index(K));
    pred[i] = int(rng.uniform_index(K));
    double sum = 0.0;
    for (auto& x : dists[i]) sum += (x = rng.uniform_real(0.0, 1.0));
    for (auto& x : dists[i]) x /= sum;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::report(gold, pred, dists));
  }
}
BENCHMARK(BM_report)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
