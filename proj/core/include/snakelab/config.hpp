#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "snakelab/distribution.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/snake.hpp"

namespace snakelab {

/// Flat `key = value` config with [section] headers; `#` starts a comment.
/// Unknown sections or keys are errors, so a stored config either replays
/// exactly or fails loudly. A config plus the library version determines
/// every output byte of a run.
struct ExperimentConfig {
  // [graph]
  std::string family = "torus2";  ///< hypercube|torus2|torus3|cycle|cayley
  unsigned n = 8;                 ///< family size parameter
  std::string group;              ///< cayley only: group spec text
  std::string generators;         ///< cayley/subproduct: comma-separated element ids

  // [chunks]
  std::string method = "uniform_ball";
  unsigned s = 2;

  // [snake]
  unsigned ell = 0;  ///< 0 -> derive from c_ell
  double c_ell = 1.0;
  double eps = 1.0;
  double consist_threshold = 0.9;
  double good_prob_threshold = 0.9;

  // [run]
  unsigned trials = 100;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;  ///< 0 -> enumeration_budget()
  std::string outdir = ".";

  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  /// Canonical serialization: parse(to_text()) == *this field for field.
  std::string to_text() const;

  std::shared_ptr<const VertexTransitiveGraph> build_graph() const;
  SnakeParams snake_params(const VertexTransitiveGraph& graph) const;
  ChunkDistribution build_chunks(const VertexTransitiveGraph& graph) const;
  std::uint64_t effective_budget() const;
};

}  // namespace snakelab
