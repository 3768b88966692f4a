#include "snakelab/solvers.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "snakelab/oracle.hpp"

namespace snakelab {

LandscapeOracle make_instance(const VertexTransitiveGraph& graph, const Snake& x) {
  auto values = std::make_shared<SnakeFunction>(materialize_landscape(graph, x));
  return LandscapeOracle(graph.vertex_count(),
                         [values](Vertex v) { return (*values)(v); });
}

DecisionOracle make_decision_instance(const VertexTransitiveGraph& graph, const Snake& x, int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("make_decision_instance: bit must be 0 or 1");
  auto values = std::make_shared<SnakeFunction>(materialize_landscape(graph, x));
  const Vertex minimum = x.tail_end();
  return DecisionOracle(graph.vertex_count(), [values, minimum, b](Vertex v) {
    if (v == minimum) return DecisionValue{0, b};
    return DecisionValue{(*values)(v), -1};
  });
}

std::uint64_t aldous_default_samples(const VertexTransitiveGraph& graph) {
  const double t = std::sqrt(static_cast<double>(graph.vertex_count()) * graph.degree());
  return static_cast<std::uint64_t>(std::ceil(t));
}

std::vector<Vertex> enumerate_local_minima(const VertexTransitiveGraph& graph,
                                           const std::vector<std::int64_t>& values) {
  if (values.size() != graph.vertex_count()) {
    throw std::invalid_argument("enumerate_local_minima: dense value table size mismatch");
  }
  return enumerate_local_minima(graph, [&values](Vertex v) { return values[v]; });
}

LowerBoundFormula lower_bound_formula(std::uint64_t n_vertices, double d) {
  if (n_vertices < 2) throw std::invalid_argument("lower_bound_formula: N must be at least 2");
  if (!(d >= 1.0)) throw std::invalid_argument("lower_bound_formula: d must be at least 1");
  const double n = static_cast<double>(n_vertices);
  const double log_n = std::log2(n);
  LowerBoundFormula out;
  out.rls = std::sqrt(n) / (d * log_n);
  out.qls = std::pow(n, 0.25) / std::sqrt(d * log_n);
  return out;
}

}  // namespace snakelab
