#pragma once

#include <cstdint>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "snakelab/graph.hpp"
#include "snakelab/snake.hpp"

namespace snakelab {

/// Value of a decision instance: the landscape value paired with a hidden
/// bit that is revealed only at the unique minimum (-1 elsewhere). Ordered
/// lexicographically so solvers can descend on it directly.
struct DecisionValue {
  std::int64_t value = 0;
  int bit = -1;

  friend bool operator==(const DecisionValue& a, const DecisionValue& b) {
    return a.value == b.value && a.bit == b.bit;
  }
  friend bool operator<(const DecisionValue& a, const DecisionValue& b) {
    return std::tie(a.value, a.bit) < std::tie(b.value, b.bit);
  }
};

/// Wraps a vertex -> value function and counts oracle accesses. With
/// memoization on (the default), repeated asks of the same vertex hit the
/// cache and do not increment the counter; the log records only counted
/// (first) asks so the accounting policy is visible per run.
template <typename Value>
class CountingOracle {
public:
  using Fn = std::function<Value(Vertex)>;

  CountingOracle(std::size_t domain_size, Fn fn, bool memoize = true)
      : fn_(std::move(fn)), memoize_(memoize), cache_(domain_size), cached_(domain_size, 0) {}

  Value operator()(Vertex v) {
    if (memoize_ && cached_[v]) return cache_[v];
    ++count_;
    log_.push_back(v);
    Value value = fn_(v);
    if (memoize_) {
      cache_[v] = value;
      cached_[v] = 1;
    }
    return value;
  }

  std::uint64_t query_count() const { return count_; }
  const std::vector<Vertex>& query_log() const { return log_; }
  bool memoized() const { return memoize_; }
  std::size_t domain_size() const { return cache_.size(); }

private:
  Fn fn_;
  bool memoize_;
  std::uint64_t count_ = 0;
  std::vector<Vertex> log_;
  std::vector<Value> cache_;
  std::vector<char> cached_;
};

using LandscapeOracle = CountingOracle<std::int64_t>;
using DecisionOracle = CountingOracle<DecisionValue>;

/// Counting oracle answering the snake's landscape function; the counter
/// starts at zero.
LandscapeOracle make_instance(const VertexTransitiveGraph& graph, const Snake& x);

/// Decision variant: (landscape value, -1) away from the minimum and
/// (0, b) at it. The snake itself is metadata and cannot be queried.
DecisionOracle make_decision_instance(const VertexTransitiveGraph& graph, const Snake& x, int b);

}  // namespace snakelab
