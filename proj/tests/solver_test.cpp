#include <cmath>

#include "doctest.h"
#include "snakelab/graph.hpp"
#include "snakelab/oracle.hpp"
#include "snakelab/rng.hpp"
#include "snakelab/snake.hpp"
#include "snakelab/solvers.hpp"

using namespace snakelab;

namespace {

Snake straight_snake(std::vector<Vertex> vertices) {
  Snake snake;
  snake.vertices = std::move(vertices);
  snake.s = 1;
  return snake;
}

}  // namespace

TEST_CASE("counting oracle memoizes and logs") {
  CountingOracle<int> oracle(4, [](Vertex v) { return int(10 - v); });
  CHECK(oracle.query_count() == 0);
  CHECK(oracle(2) == 8);
  CHECK(oracle(2) == 8);
  CHECK(oracle(1) == 9);
  CHECK(oracle.query_count() == 2);
  CHECK(oracle.query_log() == std::vector<Vertex>{2, 1});
}

TEST_CASE("steepest descent walks the 6-cycle landscape") {
  VertexTransitiveGraph c6 = preset_cycle(6);
  Snake x = straight_snake({0, 1, 2});
  LandscapeOracle oracle = make_instance(c6, x);
  SolveResult res = steepest_descent(c6, oracle, 4);
  CHECK(res.vertex == 2);
  CHECK(res.trace == std::vector<Vertex>{4, 5, 0, 1, 2});
  // Distinct queried vertices: 4 and 3, then 5, 0, 1, 2 along the descent.
  CHECK(res.queries == 6);

  // Memoization: a rerun from the same start adds no queries.
  SolveResult again = steepest_descent(c6, oracle, 4);
  CHECK(again.vertex == 2);
  CHECK(again.queries == 6);

  // Starting at the minimum queries just the closed neighborhood.
  LandscapeOracle fresh = make_instance(c6, x);
  SolveResult at_min = steepest_descent(c6, fresh, 2);
  CHECK(at_min.vertex == 2);
  CHECK(at_min.trace == std::vector<Vertex>{2});
  CHECK(at_min.queries == 1 + c6.degree());
}

TEST_CASE("descent reaches the tail from across the cycle") {
  VertexTransitiveGraph c12 = preset_cycle(12);
  Snake x = straight_snake({0, 1, 2, 3, 4, 5, 6});
  LandscapeOracle oracle = make_instance(c12, x);
  SolveResult res = steepest_descent(c12, oracle, 9);
  CHECK(res.vertex == 6);
  CHECK(res.trace.size() == 10);  // 9 -> 10 -> 11 -> 0 -> ... -> 6
  SnakeFunction f = materialize_landscape(c12, x);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(f(res.trace[i]) < f(res.trace[i - 1]));
}

TEST_CASE("aldous solver finds the unique minimum") {
  VertexTransitiveGraph t10 = preset_torus(10, 2);
  ChunkDistribution ds = build_chunk_distribution(t10, 2, ChunkMethod::UniformBall);
  SnakeParams params = SnakeParams::scaled(t10, 2, 1.0);
  SnakeSampler sampler(t10, ds, params);
  CHECK(aldous_default_samples(t10) == 20);  // ceil(sqrt(100 * 4))

  for (unsigned trial = 0; trial < 25; ++trial) {
    Rng rng(derive_seed(123, trial));
    Snake x = sampler.sample(t10.base_vertex(), rng);
    LandscapeOracle oracle = make_instance(t10, x);
    SolveResult res = aldous_solver(t10, oracle, aldous_default_samples(t10), rng);
    CHECK(res.vertex == x.tail_end());
    CHECK(verify_local_min(t10, [&](Vertex v) { return landscape_value(t10, x, v); }, res.vertex));
    CHECK(res.queries <= t10.vertex_count());
  }

  Rng rng(1);
  LandscapeOracle oracle = make_instance(t10, sampler.sample(t10.base_vertex(), rng));
  CHECK_THROWS_AS(aldous_solver(t10, oracle, 0, rng), std::invalid_argument);
}

TEST_CASE("decision instances expose one bit at the tail") {
  VertexTransitiveGraph c6 = preset_cycle(6);
  Snake x = straight_snake({0, 1, 2});
  DecisionOracle oracle = make_decision_instance(c6, x, 1);
  DecisionValue at_tail = oracle(2);
  CHECK(at_tail.value == 0);
  CHECK(at_tail.bit == 1);
  DecisionValue off = oracle(4);
  CHECK(off.value == 4);
  CHECK(off.bit == -1);
  CHECK(at_tail < off);  // lexicographic on (value, bit)

  // The decision landscape has the same unique minimum, so descent solves it.
  SolveResult res = steepest_descent(c6, oracle, 4);
  CHECK(res.vertex == 2);
  CHECK(oracle(res.vertex).bit == 1);

  CHECK_THROWS_AS(make_decision_instance(c6, x, 2), std::invalid_argument);
}

TEST_CASE("local minima enumeration matches between overloads") {
  VertexTransitiveGraph c6 = preset_cycle(6);
  Snake x = straight_snake({0, 1, 2});
  SnakeFunction f = materialize_landscape(c6, x);
  std::vector<Vertex> dense = enumerate_local_minima(c6, f.values);
  std::vector<Vertex> lazy = enumerate_local_minima(c6, [&](Vertex v) { return f(v); });
  CHECK(dense == std::vector<Vertex>{2});
  CHECK(lazy == dense);
}

TEST_CASE("lower bound formula values") {
  LowerBoundFormula q10 = lower_bound_formula(1024, 10.0);
  CHECK(q10.rls == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(q10.qls == doctest::Approx(std::pow(1024.0, 0.25) / 10.0).epsilon(1e-12));
  CHECK(lower_bound_formula(4, 1.0).rls == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lower_bound_formula(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lower_bound_formula(16, 0.5), std::invalid_argument);
}

TEST_CASE("hypercube bound scales as 2^(n/2) over n^2") {
  const double base = lower_bound_formula(16, 4.0).rls * 16.0 / 4.0;  // n = 4
  for (unsigned n = 5; n <= 20; ++n) {
    LowerBoundFormula lb = lower_bound_formula(std::uint64_t(1) << n, double(n));
    double ratio = lb.rls * double(n) * double(n) / std::exp2(0.5 * double(n));
    CHECK(std::abs(ratio / base - 1.0) <= 1e-9);
  }
}
