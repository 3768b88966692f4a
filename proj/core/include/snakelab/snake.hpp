#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snakelab/distribution.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/rng.hpp"

namespace snakelab {

/// Ceiling for exact enumeration work. The SNAKELAB_BUDGET environment
/// variable (a positive integer) overrides the fallback when set.
std::uint64_t enumeration_budget(std::uint64_t fallback = 1'000'000);

/// Shape parameters of a snake walk: ell+1 chunks of s steps each, so the
/// sequence has L = s*(ell+1) steps past the head. `eps` is the hitting
/// threshold used when classifying snakes, and the two probability
/// thresholds define "consistent enough" and "good enough" rates.
struct SnakeParams {
  unsigned s = 1;
  unsigned ell = 1;
  double eps = 1.0;
  double consist_threshold = 0.9;
  double good_prob_threshold = 0.9;

  unsigned length() const { return s * (ell + 1); }

  /// ell = max(1, floor(sqrt(N) / (c_ell * s))): the number of flickable
  /// chunks grows with sqrt of the graph size, damped by c_ell.
  static SnakeParams scaled(const VertexTransitiveGraph& graph, unsigned s, double c_ell);

  void validate() const;
};

/// A snake: a sequence x_0..x_L where consecutive vertices are equal or
/// adjacent, assembled from ell+1 seed-translated canonical path chunks.
/// `seeds` holds the chunk seeds when the snake was produced by a sampler;
/// parsed snakes carry only the vertex sequence.
struct Snake {
  std::vector<Vertex> vertices;  ///< x_0..x_L
  std::vector<Vertex> seeds;     ///< one seed per chunk (may be empty)
  unsigned s = 1;                ///< chunk stride

  Vertex head() const { return vertices.front(); }
  Vertex tail_end() const { return vertices.back(); }
  unsigned length() const { return static_cast<unsigned>(vertices.size()) - 1; }
};

/// "snake v1 L=<L> s=<s>" header followed by one vertex per line.
std::string serialize(const Snake& snake);

/// Parses and, when a graph is supplied, validates that consecutive
/// vertices are equal or adjacent and ids are in range.
Snake parse_snake(std::string_view text, const VertexTransitiveGraph* graph = nullptr);

/// Draws snakes on a graph: each chunk k translates the canonical extended
/// path of a fresh seed g_k by the automorphism sigma_{x_{sk}} attached to
/// the chunk's start vertex, so chunk endpoints satisfy
/// x_{s(k+1)} = sigma_{x_{sk}}(g_k).
///
/// Seed paths are precomputed per support vertex. On non-Cayley graphs only
/// the uniform_all seed distribution with s == diameter is supported (other
/// combinations are rejected: mid-chunk mixing is only guaranteed there).
class SnakeSampler {
public:
  SnakeSampler(const VertexTransitiveGraph& graph, const ChunkDistribution& ds,
               const SnakeParams& params);

  const VertexTransitiveGraph& graph() const { return *graph_; }
  const ChunkDistribution& chunk_distribution() const { return *ds_; }
  const SnakeParams& params() const { return params_; }

  const std::vector<Vertex>& support() const { return support_; }
  const std::vector<double>& support_weights() const { return weights_; }
  const std::vector<Vertex>& seed_path(std::size_t support_index) const {
    return paths_[support_index];
  }
  std::size_t support_index(Vertex seed) const;

  Vertex sample_seed(Rng& rng) const;

  /// Deterministic assembly from explicit seeds (one per chunk).
  Snake assemble(Vertex x0, const std::vector<Vertex>& seeds) const;

  Snake sample(Vertex x0, Rng& rng) const;

  struct FlickResult {
    unsigned j = 0;  ///< flick position, a multiple of s in [s, ell*s]
    Snake snake;
  };

  /// Keeps chunks covering positions <= j and resamples the rest; the
  /// returned snake agrees with `x` on positions 0..j exactly.
  FlickResult flick(const Snake& x, Rng& rng) const;

private:
  const VertexTransitiveGraph* graph_;
  const ChunkDistribution* ds_;
  SnakeParams params_;
  std::vector<Vertex> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<std::vector<Vertex>> paths_;
  std::vector<std::size_t> support_index_;  // dense vertex -> support slot (or npos)
};

/// The value landscape of a snake: L - (last index visiting v) on the snake,
/// L + dist(head, v) off it. Its unique local minimum is the snake's tail
/// end; walking the snake backwards descends to it.
struct SnakeFunction {
  std::vector<std::int64_t> values;
  std::int64_t operator()(Vertex v) const { return values[v]; }
};

SnakeFunction materialize_landscape(const VertexTransitiveGraph& graph, const Snake& snake);

/// Single-point evaluation without materializing (O(L) scan plus one
/// distance lookup when v is off the snake).
std::int64_t landscape_value(const VertexTransitiveGraph& graph, const Snake& snake, Vertex v);

/// Last index i with x_i == v, or -1; dense over all n vertices.
std::vector<std::int64_t> last_visit_index(const Snake& snake, std::size_t n);

/// 1 when v appears anywhere in the snake's vertex sequence, else 0.
int set_indicator(const Snake& snake, Vertex v);

/// Comparison of two same-head, same-length snakes. They "disagree" at v
/// when both visit v but at different last indices; a consistent pair has
/// no disagreements. When consistent (and requested), the equivalence
/// "landscapes differ exactly where membership differs" is also verified.
struct DisagreementReport {
  std::vector<Vertex> vertices;
  bool consistent = true;
  bool tails_distinct = false;
  bool equivalence_checked = false;
  bool equivalence_holds = false;
};

DisagreementReport find_disagreements(const VertexTransitiveGraph& graph, const Snake& x,
                                      const Snake& y, bool check_equivalence = false);

struct ConsistencyEstimate {
  double probability = 0.0;
  double std_err = 0.0;
  double wilson_low = 0.0;   ///< 95% Wilson interval, Monte Carlo mode only
  double wilson_high = 1.0;
  std::uint64_t trials = 0;  ///< enumerated tail tuples in exact mode
  bool exact = false;
};

/// Pr over flick position and resampled tail that the result is consistent
/// with `x` and ends elsewhere. Exact mode enumerates all seed tail tuples
/// (sum_m |support|^(ell+1-m) of them; SizeLimitError above `budget`).
ConsistencyEstimate consistency_probability_exact(const SnakeSampler& sampler, const Snake& x,
                                                  std::uint64_t budget = enumeration_budget());
ConsistencyEstimate consistency_probability_mc(const SnakeSampler& sampler, const Snake& x,
                                               unsigned trials, Rng& rng);

/// cover[u] = Pr over seeds g that u lies on the canonical path of g.
std::vector<double> seed_cover_probability(const VertexTransitiveGraph& graph,
                                           const ChunkDistribution& ds);

/// Sparsity score: max over v of sum_{k=1..ell} cover(sigma_{x_{sk}}^{-1}(v)).
/// The snake is eps-sparse when the max is <= eps * ell.
struct SparsityResult {
  double max_score = 0.0;
  Vertex argmax = 0;
  double threshold = 0.0;
  bool sparse = false;
};

SparsityResult sparsity_check(const VertexTransitiveGraph& graph,
                              const std::vector<double>& cover_prob, const Snake& x,
                              const SnakeParams& params, double eps);

/// Per-vertex probability (over flick position and tail) that the resampled
/// tail visits v strictly after the flick point.
struct HittingResult {
  std::vector<double> per_vertex;
  double max_prob = 0.0;
  Vertex argmax = 0;
  bool exact = false;
  double std_err = 0.0;  ///< MC mode: per-vertex binomial error at the max
};

/// Exact dynamic program over chunk endpoints: cost O(N * |support| * ell)
/// per (vertex, flick) pair, refused above `budget` per pair or when the
/// translation table would exceed its cap.
HittingResult hitting_probabilities_exact(const SnakeSampler& sampler, const Snake& x,
                                          std::uint64_t budget = enumeration_budget());
HittingResult hitting_probabilities_mc(const SnakeSampler& sampler, const Snake& x,
                                       unsigned trials, Rng& rng);

/// Combined check that an eps-sparse snake (with eps >= 2(L-s)/N) has
/// hitting probabilities bounded by 2*eps everywhere.
struct SparseHittingReport {
  double eps = 0.0;
  double sparse_max = 0.0;
  bool sparse = false;
  bool precondition_ok = false;  ///< sparse and eps >= 2(L-s)/N
  double hitting_max = 0.0;
  double bound = 0.0;  ///< 2*eps
  bool holds = false;
  bool exact = false;
};

SparseHittingReport sparse_implies_hitting_check(const SnakeSampler& sampler, const Snake& x,
                                                 double eps,
                                                 std::uint64_t budget = enumeration_budget());

/// Distribution of the snake position x_t over every start vertex, compared
/// with uniform: max_tv should be <= delta of the seed distribution for all
/// t >= s. Exact below budget, otherwise Monte Carlo with std error.
struct MixingCheck {
  unsigned t = 0;
  double max_tv = 0.0;
  Vertex argmax_start = 0;
  double delta = 0.0;
  bool exact = false;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

MixingCheck chunk_position_mixing(const VertexTransitiveGraph& graph, const ChunkDistribution& ds,
                                  unsigned ell, unsigned t,
                                  std::uint64_t budget = enumeration_budget(),
                                  std::uint64_t mc_seed = 0);

/// Whether one snake is "good": consistent enough under flicks and
/// eps-hitting. Exact subroutines are used when they fit the budget,
/// Monte Carlo otherwise.
struct GoodnessReport {
  ConsistencyEstimate consistency;
  HittingResult hitting;
  double eps = 0.0;
  bool good = false;
};

GoodnessReport classify_goodness(const SnakeSampler& sampler, const Snake& x,
                                 std::uint64_t budget = enumeration_budget(),
                                 unsigned mc_trials = 4096, std::uint64_t mc_seed = 1);

/// Fraction of sampled snakes that are good, with the theoretical floors
/// that apply in the small-delta regime reported alongside.
struct GoodnessRateResult {
  unsigned trials = 0;
  double good_fraction = 0.0;
  double std_err = 0.0;
  double mean_consistency = 0.0;
  double disagreement_bound = 0.0;        ///< 2*(L-s)^2*(delta + 1/N)
  double endpoint_collision_bound = 0.0;  ///< delta + 1/N
  double consistency_floor = 0.0;         ///< 0.9999 - 2/N, when applicable
  double goodness_floor = 0.0;            ///< 0.999 - 20/N, when applicable
  bool floors_applicable = false;         ///< delta <= 1/N and 2(L-s)^2/N <= 1e-4
};

GoodnessRateResult goodness_rate(const SnakeSampler& sampler, unsigned snake_trials,
                                 std::uint64_t seed, std::uint64_t budget = enumeration_budget(),
                                 unsigned mc_trials = 4096);

/// Tail bound experiment: draw ell iid uniform vertices, sum their cover
/// probabilities, and compare the frequency of exceeding 2*ell*eps with the
/// 2^(-ell*eps) ceiling (valid when s/N <= eps^2/6).
struct SparseTailResult {
  unsigned trials = 0;
  double frequency = 0.0;
  double std_err = 0.0;
  double ceiling = 0.0;
  double threshold = 0.0;
  bool precondition_ok = false;
};

SparseTailResult sparse_tail_experiment(const VertexTransitiveGraph& graph,
                                        const std::vector<double>& cover_prob, unsigned s,
                                        unsigned ell, double eps, unsigned trials,
                                        std::uint64_t seed);

}  // namespace snakelab
