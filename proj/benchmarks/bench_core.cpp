#include <benchmark/benchmark.h>

#include "resched/experiment.hpp"

using namespace resched;

namespace {

AntigenUniverse bench_universe() {
  Rng rng = make_rng(1, {1});
  return generate_universe(default_base_problem(), rng);
}

}  // namespace

static void BM_BestMatch(benchmark::State& state) {
  const AntigenUniverse u = bench_universe();
  const AntibodyPool pool = generate_pool(build_libraries(u), PopulationType::A);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_match(u[i % u.size()], pool.antibodies[i % pool.size()]));
    ++i;
  }
}
BENCHMARK(BM_BestMatch);

static void BM_GeneratePool(benchmark::State& state) {
  const AntigenUniverse u = bench_universe();
  const LibrarySet libs = build_libraries(u);
  const auto type = static_cast<PopulationType>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_pool(libs, type).size());
}
BENCHMARK(BM_GeneratePool)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_Evolve(benchmark::State& state) {
  const AntigenUniverse u = bench_universe();
  const AntibodyPool pool = generate_pool(build_libraries(u), PopulationType::A);
  Rng rng = make_rng(2);
  const AntigenSample sample = AntigenSample::draw(static_cast<int>(state.range(0)), rng);
  const Population start = Population::evaluate(sample_initial(pool, 100, rng), u, sample);
  GAConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(start, u, sample, cfg, rng).best_fitness());
}
BENCHMARK(BM_Evolve)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_SaRefine(benchmark::State& state) {
  const AntigenUniverse u = bench_universe();
  Rng rng = make_rng(3);
  const AntigenSample sample = AntigenSample::draw(8, rng);
  const Antibody start{{1, 2, 3, 4, 5}, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(sa_refine(start, u, sample, SAConfig{}, rng).fitness);
}
BENCHMARK(BM_SaRefine)->Unit(benchmark::kMicrosecond);

static void BM_GdRefine(benchmark::State& state) {
  const AntigenUniverse u = bench_universe();
  Rng rng = make_rng(4);
  const AntigenSample sample = AntigenSample::draw(8, rng);
  const Antibody start{{1, 2, 3, 4, 5}, std::nullopt};
  GDConfig cfg;
  cfg.stagnation_limit.reset();
  for (auto _ : state) benchmark::DoNotOptimize(gd_refine(start, u, sample, cfg, rng).fitness);
}
BENCHMARK(BM_GdRefine)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
