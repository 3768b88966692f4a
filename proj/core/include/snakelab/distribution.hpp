#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snakelab/graph.hpp"
#include "snakelab/rng.hpp"

namespace snakelab {

/// A probability distribution over vertex ids 0..N-1, stored densely.
/// Weights are validated non-negative and summing to 1 within 1e-9.
class VertexDistribution {
public:
  static constexpr double kSumTolerance = 1e-9;

  explicit VertexDistribution(std::vector<double> weights);

  static VertexDistribution uniform(std::size_t n);
  static VertexDistribution point_mass(std::size_t n, Vertex v);

  std::size_t size() const { return w_.size(); }
  double operator[](Vertex v) const { return w_[v]; }
  const std::vector<double>& weights() const { return w_; }

  /// Vertices with non-zero weight, ascending.
  std::vector<Vertex> support() const;

  /// Image distribution under a deterministic map (data processing).
  VertexDistribution pushed(const std::vector<Vertex>& map, std::size_t image_size) const;

  /// CSV round-trip: "vertex,weight" rows followed by a "# sum=... delta=..."
  /// trailer where delta is the total-variation distance to uniform.
  std::string serialize_csv() const;
  static VertexDistribution parse_csv(std::string_view text);

private:
  std::vector<double> w_;
};

/// Total variation distance (half L1). Requires equal sizes.
double tv_distance(const VertexDistribution& a, const VertexDistribution& b);

/// True when tv(d, uniform) <= delta (within a 1e-12 rounding guard).
bool is_delta_uniform(const VertexDistribution& d, double delta);

/// Distribution of the subproduct g_1^{e_1} ... g_s^{e_s} with e_i fair
/// independent bits; computed by s exact convolution steps, cost O(s*|G|).
VertexDistribution subproduct_distribution(const FiniteGroup& group,
                                           const std::vector<Element>& gens);

/// How the distribution of a chunk seed is produced.
enum class ChunkMethod { UniformBall, Subproduct, LazyWalk, UniformAll };

ChunkMethod parse_chunk_method(std::string_view name);
std::string to_string(ChunkMethod m);

/// A seed distribution for snake chunks: supported inside the radius-s ball
/// around the base vertex, with its exact total-variation distance to the
/// uniform distribution over all vertices recorded alongside.
struct ChunkDistribution {
  VertexDistribution dist;
  unsigned radius = 0;  ///< s: every support vertex is within distance s of base
  double delta = 0.0;   ///< exact tv(dist, uniform over all vertices)
  ChunkMethod method = ChunkMethod::UniformAll;

  double recompute_delta() const { return tv_distance(dist, VertexDistribution::uniform(dist.size())); }
};

/// Builds a chunk seed distribution on `graph`:
///  - UniformBall: uniform over the radius-s ball around the base vertex.
///  - Subproduct: subproduct distribution of `subproduct_gens` (s of them,
///    each a neighbor of the base vertex; Cayley graphs only).
///  - LazyWalk: s steps of the lazy random walk (stay with prob 1/2) from
///    the base vertex.
///  - UniformAll: uniform over every vertex; requires s == diameter.
ChunkDistribution build_chunk_distribution(const VertexTransitiveGraph& graph, unsigned s,
                                           ChunkMethod method,
                                           const std::vector<Element>* subproduct_gens = nullptr);

/// Outcome of sampling random s-element generator tuples and testing whether
/// their subproduct distribution is delta-uniform. `lambda` is
/// s - 2*log2(order) - 2*log2(1/delta); the predicted success floor
/// 1 - 2^(-lambda) applies (non-vacuously) only when lambda > 0.
struct SubproductUniformityResult {
  unsigned trials = 0;
  double fraction = 0.0;
  double std_err = 0.0;
  double lambda = 0.0;
  double predicted_floor = 0.0;
  bool vacuous = true;
};

SubproductUniformityResult random_subproduct_experiment(const FiniteGroup& group, unsigned s,
                                                        double delta, unsigned trials,
                                                        std::uint64_t seed);

/// A joint distribution over a small product space, probabilities row-major
/// with the last coordinate fastest. Validated like VertexDistribution.
struct JointDistribution {
  std::vector<std::size_t> shape;
  std::vector<double> probs;

  static constexpr std::size_t kOutcomeCap = 1u << 20;

  JointDistribution(std::vector<std::size_t> shape, std::vector<double> probs);
  std::size_t coordinates() const { return shape.size(); }
};

/// Check of the chained total-variation bound
///   tv(X, Y) <= tv(X_1, Y_1) + sum_i max_hist tv(X_i | hist, Y_i | hist)
/// where the max runs over histories (A_1,...,A_{i-1}) of outcome subsets
/// with positive probability on both sides. The max is exhaustive over all
/// subset histories when every coordinate has <= kExhaustiveOutcomes outcomes
/// and there are <= kExhaustiveCoords coordinates; otherwise only singleton
/// histories are scanned and the result is flagged partial (then lhs > rhs
/// is inconclusive rather than a violation).
struct TvChainResult {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> terms;  ///< per-coordinate contributions to rhs
  bool exhaustive = true;
  bool holds = false;         ///< lhs <= rhs + 1e-12
  bool inconclusive = false;  ///< partial max and lhs > rhs
};

TvChainResult tv_chain_bound_check(const JointDistribution& x, const JointDistribution& y);

inline constexpr std::size_t kExhaustiveOutcomes = 8;
inline constexpr std::size_t kExhaustiveCoords = 3;

}  // namespace snakelab
