#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "snakelab/errors.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/oracle.hpp"
#include "snakelab/rng.hpp"

namespace snakelab {

struct SolveResult {
  Vertex vertex = 0;            ///< returned local minimum
  std::uint64_t queries = 0;    ///< total counted oracle accesses
  std::vector<Vertex> trace;    ///< descent path (current vertex per step)
};

/// Repeatedly queries the current vertex and all its neighbors, moves to
/// the strictly smallest neighbor (smallest id among equals), and stops
/// when none improves. Terminates because values strictly decrease.
template <typename Value>
SolveResult steepest_descent(const VertexTransitiveGraph& graph, CountingOracle<Value>& oracle,
                             Vertex start) {
  if (start >= graph.vertex_count()) {
    throw std::invalid_argument("steepest_descent: start vertex out of range");
  }
  SolveResult res;
  Vertex cur = start;
  Value cur_value = oracle(cur);
  res.trace.push_back(cur);
  for (;;) {
    bool moved = false;
    Vertex best = cur;
    Value best_value = cur_value;
    for (Vertex w : graph.neighbors(cur)) {  // ascending ids, so strict < picks the smallest
      Value value = oracle(w);
      if (value < best_value) {
        best = w;
        best_value = value;
        moved = true;
      }
    }
    if (!moved) break;
    cur = best;
    cur_value = best_value;
    res.trace.push_back(cur);
  }
  res.vertex = cur;
  res.queries = oracle.query_count();
  return res;
}

/// T + degree*N/T is balanced at T = ceil(sqrt(N * degree)).
std::uint64_t aldous_default_samples(const VertexTransitiveGraph& graph);

/// Queries `samples` uniform random vertices, then descends from the best
/// one. The oracle's memo is shared, so the reported total never double
/// counts a vertex.
template <typename Value>
SolveResult aldous_solver(const VertexTransitiveGraph& graph, CountingOracle<Value>& oracle,
                          std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("aldous_solver: need at least one sample");
  Vertex best = 0;
  bool have = false;
  Value best_value{};
  for (std::uint64_t t = 0; t < samples; ++t) {
    const Vertex v = static_cast<Vertex>(rng.next_below(graph.vertex_count()));
    Value value = oracle(v);
    if (!have || value < best_value) {
      have = true;
      best = v;
      best_value = value;
    }
  }
  SolveResult res = steepest_descent(graph, oracle, best);
  res.queries = oracle.query_count();
  return res;
}

/// f(v) <= f(w) for every neighbor w, evaluated against the raw function
/// (never the counted oracle).
template <typename Fn>
  requires std::invocable<Fn&, Vertex>
bool verify_local_min(const VertexTransitiveGraph& graph, Fn&& value_fn, Vertex v) {
  const auto fv = value_fn(v);
  for (Vertex w : graph.neighbors(v)) {
    if (value_fn(w) < fv) return false;
  }
  return true;
}

/// Exhaustive scan; refuses graphs above 10^6 vertices.
template <typename Fn>
  requires std::invocable<Fn&, Vertex>
std::vector<Vertex> enumerate_local_minima(const VertexTransitiveGraph& graph, Fn&& value_fn) {
  if (graph.vertex_count() > 1'000'000) {
    throw SizeLimitError("enumerate_local_minima: exhaustive scan capped at 10^6 vertices");
  }
  std::vector<Vertex> minima;
  for (Vertex v = 0; v < graph.vertex_count(); ++v) {
    if (verify_local_min(graph, value_fn, v)) minima.push_back(v);
  }
  return minima;
}

std::vector<Vertex> enumerate_local_minima(const VertexTransitiveGraph& graph,
                                           const std::vector<std::int64_t>& values);

/// Evaluations of the lower-bound expressions sqrt(N)/(d*log2 N) and
/// N^(1/4)/sqrt(d*log2 N); constants dropped, log base 2.
struct LowerBoundFormula {
  double rls = 0.0;
  double qls = 0.0;
};

LowerBoundFormula lower_bound_formula(std::uint64_t n_vertices, double d);

}  // namespace snakelab
