#include <benchmark/benchmark.h>

#include "snakelab/distribution.hpp"
#include "snakelab/experiments.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/oracle.hpp"
#include "snakelab/rng.hpp"
#include "snakelab/snake.hpp"
#include "snakelab/solvers.hpp"

namespace {

using namespace snakelab;

void BM_TorusBuild(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    VertexTransitiveGraph graph = preset_torus(n, 2);
    benchmark::DoNotOptimize(graph.vertex_count());
  }
}
BENCHMARK(BM_TorusBuild)->Arg(20)->Arg(40)->Arg(80);

void BM_SnakeSample(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const VertexTransitiveGraph graph = preset_torus(n, 2);
  const SnakeParams params = SnakeParams::scaled(graph, 2, 1.0);
  const ChunkDistribution ds = build_chunk_distribution(graph, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(graph, ds, params);
  Rng rng(1);
  for (auto _ : state) {
    Snake snake = sampler.sample(graph.base_vertex(), rng);
    benchmark::DoNotOptimize(snake.tail_end());
  }
}
BENCHMARK(BM_SnakeSample)->Arg(20)->Arg(40)->Arg(80);

void BM_LandscapeMaterialize(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const VertexTransitiveGraph graph = preset_torus(n, 2);
  const SnakeParams params = SnakeParams::scaled(graph, 2, 1.0);
  const ChunkDistribution ds = build_chunk_distribution(graph, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(graph, ds, params);
  Rng rng(2);
  const Snake snake = sampler.sample(graph.base_vertex(), rng);
  for (auto _ : state) {
    SnakeFunction raw = materialize_landscape(graph, snake);
    benchmark::DoNotOptimize(raw.values.data());
  }
}
BENCHMARK(BM_LandscapeMaterialize)->Arg(20)->Arg(40)->Arg(80);

void BM_AldousSolve(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const VertexTransitiveGraph graph = preset_torus(n, 2);
  const SnakeParams params = SnakeParams::scaled(graph, 2, 1.0);
  const ChunkDistribution ds = build_chunk_distribution(graph, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(graph, ds, params);
  Rng rng(3);
  for (auto _ : state) {
    const Snake snake = sampler.sample(graph.base_vertex(), rng);
    LandscapeOracle oracle = make_instance(graph, snake);
    SolveResult res = aldous_solver(graph, oracle, aldous_default_samples(graph), rng);
    benchmark::DoNotOptimize(res.queries);
  }
}
BENCHMARK(BM_AldousSolve)->Arg(20)->Arg(40);

void BM_ChunkMixingExact(benchmark::State& state) {
  const VertexTransitiveGraph graph = preset_cycle(static_cast<unsigned>(state.range(0)));
  const ChunkDistribution ds = build_chunk_distribution(graph, 2, ChunkMethod::UniformBall);
  for (auto _ : state) {
    MixingCheck check = chunk_position_mixing(graph, ds, 2, 4);
    benchmark::DoNotOptimize(check.max_tv);
  }
}
BENCHMARK(BM_ChunkMixingExact)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
