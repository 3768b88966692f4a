#include <cmath>
#include <numeric>

#include "doctest.h"
#include "snakelab/adversary.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/snake.hpp"

using namespace snakelab;

namespace {

struct MiniEnsemble {
  VertexTransitiveGraph graph;
  ChunkDistribution ds;
  SnakeParams params;
  SnakeEnsemble ensemble;
};

MiniEnsemble cycle8_ensemble() {
  VertexTransitiveGraph graph = preset_cycle(8);
  ChunkDistribution ds = build_chunk_distribution(graph, 2, ChunkMethod::UniformBall);
  SnakeParams params{2, 2, 1.0, 0.9, 0.9};
  SnakeEnsemble ensemble;
  {
    SnakeSampler sampler(graph, ds, params);
    ensemble = enumerate_snake_support(sampler, graph.base_vertex());
  }
  return MiniEnsemble{std::move(graph), std::move(ds), params, std::move(ensemble)};
}

}  // namespace

TEST_CASE("full ensemble enumeration on the 8-cycle") {
  MiniEnsemble mini = cycle8_ensemble();
  const SnakeEnsemble& e = mini.ensemble;
  CHECK(e.seed_tuples == 125);  // |ball(0,2)|^3 seed tuples
  // Chunk endpoints determine seeds, so distinct tuples give distinct snakes.
  CHECK(e.snakes.size() == 125);
  CHECK(e.merge_count == 0);
  CHECK(std::accumulate(e.p.begin(), e.p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < e.snakes.size(); ++i)
    CHECK(e.snakes[i - 1].vertices < e.snakes[i].vertices);
}

TEST_CASE("w matrix is symmetric with row sums p(X)") {
  MiniEnsemble mini = cycle8_ensemble();
  SquareMatrix w = w_matrix(mini.ensemble);
  CHECK(w.max_asymmetry() == 0.0);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < w.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < w.n; ++j) row += w.at(i, j);
    CHECK(row == doctest::Approx(mini.ensemble.p[i]).epsilon(1e-12));
  }
}

TEST_CASE("w restricted to consistent distinct pairs recovers consistency") {
  MiniEnsemble mini = cycle8_ensemble();
  SnakeSampler sampler(mini.graph, mini.ds, mini.params);
  SquareMatrix w = w_matrix(mini.ensemble);
  const SnakeEnsemble& e = mini.ensemble;
  for (std::size_t i = 0; i < e.snakes.size(); i += 17) {
    double mass = 0.0;
    for (std::size_t j = 0; j < e.snakes.size(); ++j) {
      if (w.at(i, j) == 0.0) continue;
      DisagreementReport rep = find_disagreements(mini.graph, e.snakes[i], e.snakes[j]);
      if (rep.consistent && rep.tails_distinct) mass += w.at(i, j);
    }
    double expected = e.p[i] * consistency_probability_exact(sampler, e.snakes[i]).probability;
    CHECK(mass == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("subset extraction keeps heavy rows") {
  SUBCASE("two symmetric snakes survive") {
    SquareMatrix R(2);
    R.at(0, 1) = R.at(1, 0) = 0.3;
    std::vector<std::size_t> subset = lemma8_subset({0.5, 0.5}, R, 0.6);
    CHECK(subset == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("a zero row is pruned") {
    SquareMatrix R(3);
    R.at(1, 2) = R.at(2, 1) = 0.35;
    std::vector<std::size_t> subset = lemma8_subset({0.8, 0.1, 0.1}, R, 0.6);
    CHECK(subset == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("asymmetric relations are rejected") {
    SquareMatrix R(2);
    R.at(0, 1) = 0.5;
    CHECK_THROWS(lemma8_subset({0.5, 0.5}, R, 0.5));
  }
  SUBCASE("overweight probability vectors are rejected") {
    SquareMatrix R(2);
    R.at(0, 1) = R.at(1, 0) = 0.4;
    CHECK_THROWS(lemma8_subset({0.9, 0.9}, R, 0.6));
  }
}

TEST_CASE("adversary scores on a two-snake toy relation") {
  // Two consistent snakes on the 4-cycle with distinct tails and vertex sets
  // {0,1,2} vs {0,3}: every ratio is 1, so both score aggregates are 1.
  VertexTransitiveGraph c4 = preset_cycle(4);
  SnakeEnsemble toy;
  toy.params = SnakeParams{1, 1, 1.0, 0.9, 0.9};
  toy.head = 0;
  Snake a;
  a.vertices = {0, 1, 2};
  a.s = 1;
  Snake b;
  b.vertices = {0, 3, 3};
  b.s = 1;
  toy.snakes = {a, b};
  toy.p = {0.5, 0.5};
  toy.seed_tuples = 2;

  SquareMatrix R(2);
  R.at(0, 1) = R.at(1, 0) = 0.5;
  AdversaryScores scores = adversary_scores(toy, R);
  REQUIRE(scores.defined);
  CHECK(scores.M_A[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scores.M_B[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scores.a_v(0, 1) == doctest::Approx(0.5).epsilon(1e-15));  // v=1 in the difference
  CHECK(scores.a_v(0, 0) == doctest::Approx(0.0).epsilon(1e-15));  // v=0 shared
  CHECK(scores.m_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scores.m_geom == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theorem report is internally coherent on the 8-cycle") {
  MiniEnsemble mini = cycle8_ensemble();
  SnakeSampler sampler(mini.graph, mini.ds, mini.params);
  Theorem2Report rep = theorem2_report(mini.ensemble, sampler);

  CHECK(rep.good_fraction >= 0.0);
  CHECK(rep.good_fraction <= 1.0 + 1e-12);
  CHECK(rep.eps >= 0.0);
  if (!rep.subset.empty()) {
    CHECK(rep.subset_verified);
    CHECK(rep.min_restricted_score >= rep.lemma8_r / 2.0 - 1e-9);
  }
  if (rep.scores_defined) {
    CHECK(rep.m_geom <= rep.m_max + 1e-12);
    CHECK(rep.target_m_max == doctest::Approx(0.3 / rep.eps).epsilon(1e-12));
  }
  std::string text = rep.to_text();
  CHECK(text.find("good_fraction") != std::string::npos);
  CHECK(text.find("m_geom") != std::string::npos);
}

TEST_CASE("csv emitters produce their declared schemas") {
  MiniEnsemble mini = cycle8_ensemble();
  SnakeSampler sampler(mini.graph, mini.ds, mini.params);
  SquareMatrix w = w_matrix(mini.ensemble);
  EnsembleGoodness goodness = ensemble_goodness(mini.ensemble, sampler);
  SquareMatrix R = relation_matrix(mini.ensemble, w, &goodness.good);

  std::string pairs = pair_scores_csv(w, R);
  CHECK(pairs.rfind("X_index,Y_index,w,R\n", 0) == 0);

  AdversaryScores scores = adversary_scores(mini.ensemble, R);
  std::string rows = snake_scores_csv(scores);
  CHECK(rows.rfind("X_index,M_A,min_v_ratio\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : rows)
    if (c == '\n') ++lines;
  CHECK(lines == mini.ensemble.snakes.size() + 1);
}

TEST_CASE("relation matrix only keeps good consistent distinct-tail pairs") {
  MiniEnsemble mini = cycle8_ensemble();
  SnakeSampler sampler(mini.graph, mini.ds, mini.params);
  SquareMatrix w = w_matrix(mini.ensemble);
  EnsembleGoodness goodness = ensemble_goodness(mini.ensemble, sampler);
  SquareMatrix R = relation_matrix(mini.ensemble, w, &goodness.good);
  CHECK(R.max_asymmetry() <= 1e-15);
  for (std::size_t i = 0; i < R.n; i += 13) {
    for (std::size_t j = 0; j < R.n; ++j) {
      if (R.at(i, j) == 0.0) continue;
      CHECK(R.at(i, j) == doctest::Approx(w.at(i, j)).epsilon(1e-15));
      CHECK(goodness.good[i]);
      CHECK(goodness.good[j]);
      DisagreementReport rep =
          find_disagreements(mini.graph, mini.ensemble.snakes[i], mini.ensemble.snakes[j]);
      CHECK(rep.consistent);
      CHECK(rep.tails_distinct);
    }
  }
}
