#include <benchmark/benchmark.h>

#include "tapf/assignment.hpp"
#include "tapf/bench.hpp"
#include "tapf/cbsta.hpp"
#include "tapf/itacbs.hpp"
#include "tapf/lowlevel.hpp"

using namespace tapf;

namespace {

CostTable dense_table(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  CostTable t(n, m);
  for (int i = 0; i < n; ++i) {
    std::vector<Cost> row(m);
    for (auto& c : row) c = Cost(static_cast<std::int64_t>(rng.below(100)));
    t.set_row(i, std::move(row));
  }
  return t;
}

std::shared_ptr<const GridMap> empty_map() {
  static const auto map = std::make_shared<const GridMap>(
      32, 32, std::vector<std::uint8_t>(32 * 32, 1));
  return map;
}

void BM_Hungarian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = dense_table(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(t));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_DynamicUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = dense_table(n, n, 2);
  const auto base = *hungarian(t);
  Rng rng(3);
  std::vector<Cost> row(n);
  for (auto _ : state) {
    state.PauseTiming();
    const int agent = static_cast<int>(rng.below(n));
    for (auto& c : row) c = Cost(static_cast<std::int64_t>(rng.below(100)));
    state.ResumeTiming();
    benchmark::DoNotOptimize(dynamic_update(base, agent, row));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DynamicUpdate)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_KBestNext(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = dense_table(n, n, 4);
  for (auto _ : state) {
    KBestEnumerator e(t);
    for (int k = 0; k < 20; ++k) benchmark::DoNotOptimize(e.next());
  }
}
BENCHMARK(BM_KBestNext)->Arg(10)->Arg(25);

void BM_ShortestPath(benchmark::State& state) {
  const auto map = empty_map();
  ConstraintSet omega;
  for (int t = 1; t <= state.range(0); ++t) {
    omega = omega.with(Constraint::vertex(0, {t % 32, t % 32}, t));
  }
  const auto dist = distances_to(*map, {31, 31});
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_path(*map, 0, {0, 0}, {31, 31}, omega, dist));
  }
}
BENCHMARK(BM_ShortestPath)->Arg(0)->Arg(16)->Arg(64);

void BM_SolveGroup(benchmark::State& state, const char* solver) {
  const auto c = gen_group(empty_map(), "empty-32-32", static_cast<int>(state.range(0)), 7);
  const auto solve = solver_by_name(solver);
  for (auto _ : state) benchmark::DoNotOptimize(solve(*c.instance, {}));
}
BENCHMARK_CAPTURE(BM_SolveGroup, itacbs, "itacbs")->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveGroup, cbsta, "cbsta")->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
