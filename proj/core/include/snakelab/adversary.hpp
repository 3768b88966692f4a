#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snakelab/distribution.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/snake.hpp"

namespace snakelab {

/// Dense square matrix of doubles, row-major.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit SquareMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }

  double sum() const;
  /// max |a(i,j) - a(j,i)|
  double max_asymmetry() const;
};

/// Every snake reachable from one head under a sampler, with exact
/// probabilities. Identical vertex sequences arising from different seed
/// tuples are merged (probabilities summed); `merge_count` reports how many
/// tuples were folded into an earlier sequence.
struct SnakeEnsemble {
  std::vector<Snake> snakes;  ///< distinct vertex sequences, lexicographic order
  std::vector<double> p;      ///< probabilities, sum 1
  SnakeParams params;
  Vertex head = 0;
  std::uint64_t seed_tuples = 0;
  std::uint64_t merge_count = 0;
};

/// Expands every seed tuple (|support|^(ell+1) of them; SizeLimitError above
/// `cap`) into its snake and merges duplicates.
SnakeEnsemble enumerate_snake_support(const SnakeSampler& sampler, Vertex x0,
                                      std::uint64_t cap = 1'000'000);

/// w(X,Y) = p(X) * E_j[ Pr(Z = Y | Z agrees with X up to the flick point j) ],
/// with j uniform on chunk boundaries {s,...,ell*s}. Conditioning is on
/// vertex-sequence prefixes, so merged seed tuples are handled exactly; the
/// formula is manifestly symmetric and computed identically in both orders.
SquareMatrix w_matrix(const SnakeEnsemble& ensemble);

/// Exact per-snake goodness data for an enumerable ensemble (no Monte Carlo
/// fallback: the adversary pipeline requires exact values).
struct EnsembleGoodness {
  std::vector<double> consistency;   ///< exact consistency probability per snake
  std::vector<double> hitting_max;   ///< exact hitting maximum per snake
  std::vector<char> good;            ///< consistency >= threshold and hitting <= eps
  double good_fraction = 0.0;        ///< probability mass of good snakes
  double eps_exact = 0.0;            ///< max hitting over good snakes (0 if none)
  double min_good_consistency = 1.0; ///< min consistency over good snakes (1 if none)
};

EnsembleGoodness ensemble_goodness(const SnakeEnsemble& ensemble, const SnakeSampler& sampler,
                                   std::uint64_t budget = enumeration_budget());

/// R(X,Y) = w(X,Y) when X,Y are consistent with distinct tail ends (and both
/// good, when the filter is on); 0 otherwise.
SquareMatrix relation_matrix(const SnakeEnsemble& ensemble, const SquareMatrix& w,
                             const std::vector<char>* good_filter);

struct AdversaryScores {
  std::vector<double> M_A;  ///< row sums of R
  std::vector<double> M_B;  ///< column sums of R
  /// M(A_X, v) and M(B_Y, v): sums of R over pairs whose vertex sets differ
  /// at v (row-major snake x vertex).
  std::vector<double> M_A_v;
  std::vector<double> M_B_v;
  std::size_t vertex_count = 0;
  double m_max = 0.0;
  double m_geom = 0.0;
  bool defined = false;  ///< false when R has no positive entry with a distinguishing vertex
  std::size_t argmin_x = 0, argmin_y = 0;
  Vertex argmin_v = 0;

  double a_v(std::size_t i, Vertex v) const { return M_A_v[i * vertex_count + v]; }
  double b_v(std::size_t j, Vertex v) const { return M_B_v[j * vertex_count + v]; }
};

/// Exhaustive minimization of max(M(A)/M(A,v), M(B)/M(B,v)) and of the
/// geometric mean over triples with R > 0 and differing vertex sets.
AdversaryScores adversary_scores(const SnakeEnsemble& ensemble, const SquareMatrix& R);

/// Nonempty U with sum_{j in U} R(i,j) >= r*p(i)/2 for all i in U, found by
/// deleting violators until stable and post-verified. Throws logic_error if
/// pruning empties the set (impossible when sum p <= 1 and sum R >= r).
std::vector<std::size_t> lemma8_subset(const std::vector<double>& p, const SquareMatrix& R,
                                       double r);

struct Theorem2Report {
  // Hypothesis side.
  double good_fraction = 0.0;
  double min_good_consistency = 0.0;
  double eps = 0.0;            ///< exact hitting max over good snakes
  double relation_sum = 0.0;   ///< sum of R restricted to good snakes
  bool hypotheses_met = false; ///< good_fraction >= 0.9 and relation_sum >= 0.6
  std::string failing_clause;  ///< empty when hypotheses_met

  // Lemma-8 extraction (run with r = min(0.6, relation_sum)).
  double lemma8_r = 0.0;
  std::vector<std::size_t> subset;
  bool subset_verified = false;
  double min_restricted_score = 0.0;  ///< min over subset of (row sum of restricted R)/p

  // Adversary scores on the restricted relation.
  bool scores_defined = false;
  double m_max = 0.0;
  double m_geom = 0.0;
  double target_m_max = 0.0;   ///< 0.3/eps
  double target_m_geom = 0.0;  ///< sqrt(0.3/eps)
  bool m_max_ok = false;
  bool m_geom_ok = false;

  std::string to_text() const;
};

/// Runs the whole miniature pipeline: goodness, filtered relation, Lemma-8
/// subset, restricted scores, and the comparison against 0.3/eps. Purely
/// observational; when the hypotheses fail the report names the clause.
Theorem2Report theorem2_report(const SnakeEnsemble& ensemble, const SnakeSampler& sampler,
                               std::uint64_t budget = enumeration_budget());

/// CSV with header `X_index,Y_index,w,R` over all pairs with w or R nonzero.
std::string pair_scores_csv(const SquareMatrix& w, const SquareMatrix& R);

/// CSV with header `X_index,M_A,min_v_ratio`; min_v_ratio is the smallest
/// M(A_X)/M(A_X,v) over vertices with M(A_X,v) > 0 (0 when undefined).
std::string snake_scores_csv(const AdversaryScores& scores);

}  // namespace snakelab
