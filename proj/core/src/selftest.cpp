#include "snakelab/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "snakelab/adversary.hpp"
#include "snakelab/config.hpp"
#include "snakelab/distribution.hpp"
#include "snakelab/errors.hpp"
#include "snakelab/experiments.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/group.hpp"
#include "snakelab/oracle.hpp"
#include "snakelab/rng.hpp"
#include "snakelab/snake.hpp"
#include "snakelab/solvers.hpp"

namespace snakelab {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Suite {
  std::string report;
  bool ok = true;

  void check(bool pass, const std::string& name, const std::string& detail = "") {
    report += pass ? "ok " : "FAIL ";
    report += name;
    if (!detail.empty()) {
      report += " ";
      report += detail;
    }
    report += "\n";
    ok = ok && pass;
  }
};

/// C_6 as an explicit family: same adjacency as the Cayley preset, with the
/// rotation automorphisms spelled out. Exercises the non-Cayley code paths
/// against a graph whose answers the Cayley path can confirm.
VertexTransitiveGraph explicit_cycle6() {
  const std::size_t n = 6;
  std::vector<std::vector<Vertex>> adjacency(n);
  std::vector<std::vector<Vertex>> sigma(n, std::vector<Vertex>(n));
  for (Vertex v = 0; v < n; ++v) {
    adjacency[v] = {static_cast<Vertex>((v + 1) % n), static_cast<Vertex>((v + n - 1) % n)};
    std::sort(adjacency[v].begin(), adjacency[v].end());
    for (Vertex u = 0; u < n; ++u) sigma[v][u] = static_cast<Vertex>((v + u) % n);
  }
  return VertexTransitiveGraph::explicit_family(std::move(adjacency), std::move(sigma), 0);
}

void group_checks(Suite& suite) {
  const Permutation a = parse_cycles("(0 1)", 3);
  const Permutation b = parse_cycles("(1 2)", 3);
  suite.check(format_cycles(compose(a, b)) == "(0 1 2)", "group-compose-order",
              "(0 1)*(1 2)=" + format_cycles(compose(a, b)));

  auto s4 = FiniteGroup::build(GroupSpec::symmetric(4));
  suite.check(s4->order() == 24, "group-symmetric4-order", "order=" + std::to_string(s4->order()));

  auto c = FiniteGroup::build(
      GroupSpec::closure(3, {parse_cycles("(0 1)", 3), parse_cycles("(1 2)", 3)}));
  suite.check(c->order() == 6, "group-closure-order", "order=" + std::to_string(c->order()));

  bool inverses = true;
  for (Element g = 0; g < s4->order(); ++g) {
    if (s4->multiply(g, s4->invert(g)) != s4->identity() ||
        s4->multiply(s4->invert(g), g) != s4->identity()) {
      inverses = false;
    }
  }
  suite.check(inverses, "group-inverses", "elements=" + std::to_string(s4->order()));
}

void graph_checks(Suite& suite) {
  const VertexTransitiveGraph q3 = preset_hypercube(3);
  const std::string text = q3.serialize();
  const VertexTransitiveGraph q3_round = VertexTransitiveGraph::parse(text);
  suite.check(q3_round.serialize() == text, "graph-roundtrip-cayley", "bytes=" +
              std::to_string(text.size()));

  const VertexTransitiveGraph ex6 = explicit_cycle6();
  const std::string ex_text = ex6.serialize();
  suite.check(VertexTransitiveGraph::parse(ex_text).serialize() == ex_text,
              "graph-roundtrip-explicit", "bytes=" + std::to_string(ex_text.size()));

  bool transitive = true;
  for (const VertexTransitiveGraph* g :
       {&q3, &ex6}) {
    if (!g->verify_vertex_transitive().ok) transitive = false;
  }
  const VertexTransitiveGraph c8 = preset_cycle(8);
  const VertexTransitiveGraph t6 = preset_torus(6, 2);
  if (!c8.verify_vertex_transitive().ok || !t6.verify_vertex_transitive().ok) transitive = false;
  suite.check(transitive, "graph-vertex-transitive", "graphs=4");

  // The explicit C_6 must agree with the Cayley preset everywhere.
  const VertexTransitiveGraph c6 = preset_cycle(6);
  bool agree = c6.diameter() == ex6.diameter();
  for (Vertex u = 0; u < 6 && agree; ++u) {
    for (Vertex v = 0; v < 6; ++v) {
      if (c6.distance(u, v) != ex6.distance(u, v)) {
        agree = false;
        break;
      }
    }
  }
  for (Vertex v = 0; v < 6 && agree; ++v) {
    if (c6.extended_shortest_path(v, 3) != ex6.extended_shortest_path(v, 3)) agree = false;
  }
  suite.check(agree, "graph-explicit-matches-cayley", "n=6");
}

void distribution_checks(Suite& suite) {
  auto z4 = FiniteGroup::build(GroupSpec::cyclic(4));
  const VertexDistribution sub = subproduct_distribution(*z4, {1, 1});
  const bool sub_ok = std::abs(sub[0] - 0.25) < 1e-15 && std::abs(sub[1] - 0.5) < 1e-15 &&
                      std::abs(sub[2] - 0.25) < 1e-15 && sub[3] == 0.0;
  suite.check(sub_ok, "dist-subproduct-z4",
              "weights=" + fmt(sub[0]) + "," + fmt(sub[1]) + "," + fmt(sub[2]) + "," + fmt(sub[3]));

  const VertexTransitiveGraph q3 = preset_hypercube(3);
  const ChunkDistribution ball = build_chunk_distribution(q3, 2, ChunkMethod::UniformBall);
  suite.check(std::abs(ball.delta - 0.125) < 1e-15, "dist-uniformball-q3-delta",
              "delta=" + fmt(ball.delta));

  const VertexDistribution u = VertexDistribution::uniform(8);
  suite.check(tv_distance(u, u) == 0.0 && is_delta_uniform(ball.dist, ball.delta),
              "dist-tv-sanity", "delta=" + fmt(ball.delta));
}

std::string mixing_checks(Suite& suite) {
  std::string csv = "graph,t,max_tv,delta\n";
  bool bounded = true;
  bool tight_at_s = true;
  for (const auto& [name, graph] :
       std::vector<std::pair<std::string, VertexTransitiveGraph>>{
           {"hypercube3", preset_hypercube(3)}, {"cycle8", preset_cycle(8)}}) {
    const unsigned s = 2, ell = 2;
    const ChunkDistribution ds = build_chunk_distribution(graph, s, ChunkMethod::UniformBall);
    for (unsigned t = s; t <= s * (ell + 1); ++t) {
      const MixingCheck mc = chunk_position_mixing(graph, ds, ell, t);
      csv += name + "," + std::to_string(t) + "," + fmt(mc.max_tv) + "," + fmt(ds.delta) + "\n";
      if (!mc.exact || mc.max_tv > ds.delta + 1e-9) bounded = false;
      if (t == s && std::abs(mc.max_tv - ds.delta) > 1e-12) tight_at_s = false;
    }
  }
  suite.check(bounded, "mixing-bounded-by-delta", "graphs=hypercube3,cycle8");
  suite.check(tight_at_s, "mixing-tight-at-chunk-end", "t=s recovers the seed law");

  // Per-start exact computation on the explicit C_6 must match the
  // translation-invariant single-start shortcut on the Cayley C_6.
  const VertexTransitiveGraph c6 = preset_cycle(6);
  const VertexTransitiveGraph ex6 = explicit_cycle6();
  const ChunkDistribution ds_c = build_chunk_distribution(c6, 3, ChunkMethod::UniformAll);
  const ChunkDistribution ds_e = build_chunk_distribution(ex6, 3, ChunkMethod::UniformAll);
  bool equal = true;
  for (unsigned t = 3; t <= 6; ++t) {
    const MixingCheck a = chunk_position_mixing(c6, ds_c, 1, t);
    const MixingCheck b = chunk_position_mixing(ex6, ds_e, 1, t);
    if (!a.exact || !b.exact || std::abs(a.max_tv - b.max_tv) > 1e-12) equal = false;
  }
  suite.check(equal, "mixing-explicit-equals-cayley", "n=6 s=3");
  return csv;
}

void rng_checks(Suite& suite, std::uint64_t seed) {
  suite.check(derive_seed(seed, 1) == derive_seed(seed, 1) &&
                  derive_seed(seed, 1) != derive_seed(seed, 2),
              "rng-derive-split", "streams differ");
  Rng rng(derive_seed(seed, 100));
  bool in_range = true;
  for (int i = 0; i < 1000; ++i) {
    if (rng.next_below(7) >= 7) in_range = false;
    const double x = rng.next_double();
    if (!(x >= 0.0 && x < 1.0)) in_range = false;
  }
  suite.check(in_range, "rng-bounded-draws", "draws=2000");
}

void snake_invariant_checks(Suite& suite, std::uint64_t seed) {
  const VertexTransitiveGraph torus = preset_torus(6, 2);
  const SnakeParams params = SnakeParams::scaled(torus, 2, 1.0);
  const ChunkDistribution ds = build_chunk_distribution(torus, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(torus, ds, params);

  bool steps_ok = true, endpoints_ok = true, chunks_ok = true, minima_ok = true;
  bool flick_prefix_ok = true;
  for (unsigned trial = 0; trial < 200; ++trial) {
    Rng rng(derive_seed(seed, 200 + trial));
    const Snake x = sampler.sample(torus.base_vertex(), rng);
    for (std::size_t i = 1; i < x.vertices.size(); ++i) {
      if (x.vertices[i] != x.vertices[i - 1] && !torus.is_edge(x.vertices[i - 1], x.vertices[i])) {
        steps_ok = false;
      }
    }
    for (unsigned k = 0; k <= params.ell; ++k) {
      const Vertex start = x.vertices[static_cast<std::size_t>(params.s) * k];
      const Vertex end = x.vertices[static_cast<std::size_t>(params.s) * (k + 1)];
      if (torus.automorphism_apply(start, x.seeds[k]) != end) endpoints_ok = false;
      const std::vector<Vertex> path = torus.extended_shortest_path(x.seeds[k], params.s);
      for (unsigned i = 0; i < params.s; ++i) {
        if (x.vertices[static_cast<std::size_t>(params.s) * k + 1 + i] !=
            torus.automorphism_apply(start, path[i])) {
          chunks_ok = false;
        }
      }
    }
    const SnakeFunction f = materialize_landscape(torus, x);
    const std::vector<Vertex> minima = enumerate_local_minima(torus, f.values);
    if (minima.size() != 1 || minima[0] != x.tail_end() || f(x.tail_end()) != 0) {
      minima_ok = false;
    }
    const SnakeSampler::FlickResult fr = sampler.flick(x, rng);
    for (unsigned i = 0; i <= fr.j; ++i) {
      if (fr.snake.vertices[i] != x.vertices[i]) flick_prefix_ok = false;
    }
  }
  suite.check(steps_ok, "snake-steps-adjacent", "trials=200");
  suite.check(endpoints_ok, "snake-endpoint-relation", "trials=200");
  suite.check(chunks_ok, "snake-chunk-translation", "trials=200");
  suite.check(minima_ok, "snake-unique-local-min", "trials=200");
  suite.check(flick_prefix_ok, "snake-flick-prefix", "trials=200");
}

void landscape_frozen_checks(Suite& suite) {
  const VertexTransitiveGraph c6 = preset_cycle(6);
  Snake x;
  x.s = 1;
  x.vertices = {0, 1, 2};
  const SnakeFunction f = materialize_landscape(c6, x);
  const bool values_ok = f(0) == 2 && f(1) == 1 && f(2) == 0 && f(3) == 5 && f(4) == 4 &&
                         f(5) == 3;
  suite.check(values_ok, "landscape-cycle6-frozen",
              "f=" + std::to_string(f(0)) + "," + std::to_string(f(1)) + "," +
                  std::to_string(f(2)) + "," + std::to_string(f(3)) + "," +
                  std::to_string(f(4)) + "," + std::to_string(f(5)));
  bool pointwise = true;
  for (Vertex v = 0; v < 6; ++v) {
    if (landscape_value(c6, x, v) != f(v)) pointwise = false;
  }
  suite.check(pointwise, "landscape-pointwise-matches", "n=6");

  Snake y;
  y.s = 1;
  y.vertices = {0, 1, 0};
  const DisagreementReport rep = find_disagreements(c6, x, y);
  suite.check(rep.vertices == std::vector<Vertex>{0} && !rep.consistent,
              "disagreement-revisit-case", "count=" + std::to_string(rep.vertices.size()));

  Snake z;
  z.s = 1;
  z.vertices = {0, 5, 4};
  const DisagreementReport rep2 = find_disagreements(c6, x, z, true);
  suite.check(rep2.consistent && rep2.tails_distinct && rep2.equivalence_checked &&
                  rep2.equivalence_holds,
              "disagreement-equivalence", "pair (0,1,2) vs (0,5,4)");
}

void consistency_checks(Suite& suite, std::uint64_t seed) {
  const VertexTransitiveGraph c8 = preset_cycle(8);
  SnakeParams params;
  params.s = 2;
  params.ell = 2;
  const ChunkDistribution ds = build_chunk_distribution(c8, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(c8, ds, params);
  Rng rng(derive_seed(seed, 300));
  const Snake x = sampler.sample(c8.base_vertex(), rng);

  const ConsistencyEstimate exact = consistency_probability_exact(sampler, x);
  Rng mc_rng(derive_seed(seed, 301));
  const ConsistencyEstimate mc = consistency_probability_mc(sampler, x, 2000, mc_rng);
  const double tol = 3.0 * std::max(mc.std_err, 1e-3);
  suite.check(exact.exact && std::abs(exact.probability - mc.probability) <= tol,
              "consistency-exact-vs-mc",
              "exact=" + fmt(exact.probability) + " mc=" + fmt(mc.probability) + " tol=" +
                  fmt(tol));

  const HittingResult hx = hitting_probabilities_exact(sampler, x);
  Rng mc2(derive_seed(seed, 302));
  const HittingResult hm = hitting_probabilities_mc(sampler, x, 2000, mc2);
  double max_gap = 0.0;
  for (std::size_t v = 0; v < hx.per_vertex.size(); ++v) {
    max_gap = std::max(max_gap, std::abs(hx.per_vertex[v] - hm.per_vertex[v]));
  }
  suite.check(hx.exact && max_gap <= 0.05, "hitting-exact-vs-mc", "max_gap=" + fmt(max_gap));
}

std::pair<std::string, std::string> adversary_checks(Suite& suite) {
  const VertexTransitiveGraph c8 = preset_cycle(8);
  SnakeParams params;
  params.s = 2;
  params.ell = 2;
  const ChunkDistribution ds = build_chunk_distribution(c8, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(c8, ds, params);
  const SnakeEnsemble ensemble = enumerate_snake_support(sampler, c8.base_vertex());

  double mass = 0.0;
  for (double p : ensemble.p) mass += p;
  suite.check(std::abs(mass - 1.0) <= 1e-12 && ensemble.seed_tuples == 125,
              "ensemble-probabilities",
              "snakes=" + std::to_string(ensemble.snakes.size()) + " merges=" +
                  std::to_string(ensemble.merge_count) + " mass=" + fmt(mass));

  const SquareMatrix w = w_matrix(ensemble);
  suite.check(w.max_asymmetry() <= 1e-15, "w-symmetry", "max_asym=" + fmt(w.max_asymmetry()));

  // Mass conservation: summing w over Y recovers p(X) exactly.
  double worst_row = 0.0;
  for (std::size_t i = 0; i < w.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < w.n; ++j) row += w.at(i, j);
    worst_row = std::max(worst_row, std::abs(row - ensemble.p[i]));
  }
  suite.check(worst_row <= 1e-12, "w-row-mass", "max|row-p|=" + fmt(worst_row));

  // Restricting the row sum to consistent, distinct-tailed partners must
  // reproduce p(X) times the exact consistency probability.
  const SquareMatrix R_all = relation_matrix(ensemble, w, nullptr);
  double worst_consistency = 0.0;
  for (std::size_t i = 0; i < R_all.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < R_all.n; ++j) row += R_all.at(i, j);
    const double expected =
        ensemble.p[i] *
        consistency_probability_exact(sampler, ensemble.snakes[i]).probability;
    worst_consistency = std::max(worst_consistency, std::abs(row - expected));
  }
  suite.check(worst_consistency <= 1e-12, "w-consistency-identity",
              "max_gap=" + fmt(worst_consistency));

  const Theorem2Report report = theorem2_report(ensemble, sampler);
  suite.check(report.subset_verified || report.relation_sum == 0.0, "lemma8-postverify",
              "subset=" + std::to_string(report.subset.size()));
  const AdversaryScores scores =
      adversary_scores(ensemble, relation_matrix(ensemble, w, nullptr));
  bool subsum_ok = true;
  for (std::size_t i = 0; i < scores.M_A.size(); ++i) {
    for (Vertex v = 0; v < scores.vertex_count; ++v) {
      if (scores.a_v(i, v) > scores.M_A[i] + 1e-12 || scores.b_v(i, v) > scores.M_B[i] + 1e-12) {
        subsum_ok = false;
      }
    }
  }
  suite.check(subsum_ok, "adversary-subsum", "M(A,v)<=M(A) everywhere");
  suite.check(!scores.defined || scores.m_geom <= scores.m_max + 1e-12, "adversary-geom-le-max",
              "m_geom=" + fmt(scores.m_geom) + " m_max=" + fmt(scores.m_max));

  return {pair_scores_csv(w, R_all), report.to_text()};
}

void sparse_hitting_checks(Suite& suite) {
  const VertexTransitiveGraph c8 = preset_cycle(8);
  SnakeParams params;
  params.s = 2;
  params.ell = 2;
  const ChunkDistribution ds = build_chunk_distribution(c8, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(c8, ds, params);
  const SnakeEnsemble ensemble = enumerate_snake_support(sampler, c8.base_vertex());
  const std::vector<double> cover = seed_cover_probability(c8, ds);

  const double floor_eps =
      2.0 * (params.length() - params.s) / static_cast<double>(c8.vertex_count());
  bool all_hold = true;
  unsigned checked = 0;
  for (const Snake& x : ensemble.snakes) {
    const SparsityResult sp = sparsity_check(c8, cover, x, params, 1.0);
    const double eps = std::max(sp.max_score / params.ell, floor_eps);
    const HittingResult hit = hitting_probabilities_exact(sampler, x);
    ++checked;
    if (hit.max_prob > 2.0 * eps + 1e-12) all_hold = false;
  }
  suite.check(all_hold, "sparse-implies-hitting", "snakes=" + std::to_string(checked));
}

std::string solver_checks(Suite& suite, std::uint64_t seed) {
  const VertexTransitiveGraph c6 = preset_cycle(6);
  Snake x;
  x.s = 1;
  x.vertices = {0, 1, 2};
  LandscapeOracle oracle = make_instance(c6, x);
  suite.check(oracle.query_count() == 0, "oracle-starts-at-zero", "");
  const SolveResult descent = steepest_descent(c6, oracle, 4);
  const bool frozen = descent.vertex == 2 && descent.queries == 6 &&
                      descent.trace == std::vector<Vertex>{4, 5, 0, 1, 2};
  suite.check(frozen, "solver-descent-frozen",
              "answer=" + std::to_string(descent.vertex) + " queries=" +
                  std::to_string(descent.queries));

  LandscapeOracle memo_oracle = make_instance(c6, x);
  (void)memo_oracle(0);
  (void)memo_oracle(0);
  suite.check(memo_oracle.query_count() == 1, "oracle-memoized-repeat",
              "count=" + std::to_string(memo_oracle.query_count()));

  DecisionOracle dec = make_decision_instance(c6, x, 1);
  const bool dec_ok = dec(2) == DecisionValue{0, 1} && dec(1) == DecisionValue{1, -1} &&
                      dec(4) == DecisionValue{4, -1};
  suite.check(dec_ok, "decision-oracle-values", "bit revealed only at the minimum");

  // Aldous on a torus: always ends at the snake's tail, never exceeds the
  // memoized ceiling, and per-seed counts replay exactly.
  const VertexTransitiveGraph torus = preset_torus(10, 2);
  const SnakeParams params = SnakeParams::scaled(torus, 2, 1.0);
  const ChunkDistribution ds = build_chunk_distribution(torus, 2, ChunkMethod::UniformBall);
  const SnakeSampler sampler(torus, ds, params);
  bool all_min = true, ceiling_ok = true, replay_ok = true;
  std::vector<std::uint64_t> counts;
  for (unsigned round = 0; round < 2; ++round) {
    for (unsigned trial = 0; trial < 100; ++trial) {
      Rng rng(derive_seed(seed, 400 + trial));
      const Snake snake = sampler.sample(torus.base_vertex(), rng);
      LandscapeOracle inst = make_instance(torus, snake);
      const SolveResult res = aldous_solver(torus, inst, aldous_default_samples(torus), rng);
      if (res.vertex != snake.tail_end()) all_min = false;
      if (res.queries > torus.vertex_count() * (1 + torus.degree())) ceiling_ok = false;
      if (round == 0) {
        counts.push_back(res.queries);
      } else if (counts[trial] != res.queries) {
        replay_ok = false;
      }
    }
  }
  suite.check(all_min, "solver-aldous-finds-min", "trials=100");
  suite.check(ceiling_ok, "solver-query-ceiling", "N*(1+degree)");
  suite.check(replay_ok, "solver-replay-exact", "same seeds, same counts");

  // Small steepest-descent sweep kept as a CSV artifact.
  QueryExperimentOptions options;
  options.solver = SolverKind::SteepestDescent;
  options.trials = 5;
  options.seed = derive_seed(seed, 500);
  options.s = 1;
  const std::vector<FamilyMember> members = build_family("cycle", {8, 12, 16});
  const std::vector<QueryTrialRow> rows = run_query_experiment(members, options);
  bool correct = rows.size() == 15;
  for (const QueryTrialRow& row : rows) {
    if (!row.answer_correct) correct = false;
  }
  suite.check(correct, "solver-sweep-all-correct", "rows=" + std::to_string(rows.size()));
  return query_rows_csv(rows);
}

std::string er_checks(Suite& suite, std::uint64_t seed) {
  auto z2_6 = FiniteGroup::build(GroupSpec::power(GroupSpec::cyclic(2), 6));
  const SubproductUniformityResult res =
      random_subproduct_experiment(*z2_6, 19, 0.25, 100, derive_seed(seed, 600));
  const bool floor_ok =
      !res.vacuous && res.fraction >= res.predicted_floor - 3.0 * res.std_err - 1e-12;
  suite.check(floor_ok, "er-generators-floor",
              "fraction=" + fmt(res.fraction) + " floor=" + fmt(res.predicted_floor) +
                  " lambda=" + fmt(res.lambda));
  std::string csv = "group,order,s,delta,trials,fraction,std_err,lambda,floor\n";
  csv += "power(cyclic(2),6),64,19,0.25,100," + fmt(res.fraction) + "," + fmt(res.std_err) +
         "," + fmt(res.lambda) + "," + fmt(res.predicted_floor) + "\n";
  return csv;
}

void tv_chain_checks(Suite& suite, std::uint64_t seed) {
  bool all_hold = true, all_exhaustive = true;
  unsigned trials = 500;
  for (unsigned t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, 700 + t));
    const unsigned coords = 2 + static_cast<unsigned>(rng.next_below(2));
    std::vector<std::size_t> shape(coords);
    for (auto& m : shape) m = 2 + rng.next_below(5);
    auto random_joint = [&]() {
      std::size_t cells = 1;
      for (std::size_t m : shape) cells *= m;
      std::vector<double> probs(cells);
      double sum = 0.0;
      for (double& p : probs) {
        p = rng.next_double() + 1e-9;
        sum += p;
      }
      for (double& p : probs) p /= sum;
      return JointDistribution{shape, probs};
    };
    const TvChainResult res = tv_chain_bound_check(random_joint(), random_joint());
    if (!res.exhaustive) all_exhaustive = false;
    if (!res.holds) all_hold = false;
  }
  suite.check(all_hold && all_exhaustive, "tv-chain-bound", "pairs=" + std::to_string(trials));
}

void config_checks(Suite& suite) {
  ExperimentConfig cfg;
  cfg.family = "hypercube";
  cfg.n = 4;
  cfg.s = 2;
  cfg.ell = 3;
  cfg.seed = 42;
  const std::string text = cfg.to_text();
  const ExperimentConfig round = ExperimentConfig::parse(text);
  suite.check(round.to_text() == text, "config-roundtrip", "bytes=" + std::to_string(text.size()));

  bool rejected = false;
  try {
    (void)ExperimentConfig::parse("[run]\nnonsense = 1\n");
  } catch (const ValidationError&) {
    rejected = true;
  }
  suite.check(rejected, "config-unknown-key-rejected", "");
}

}  // namespace

SelftestResult run_selftest(std::uint64_t seed) {
  Suite suite;
  suite.report += "selftest seed=" + std::to_string(seed) + "\n";

  group_checks(suite);
  graph_checks(suite);
  distribution_checks(suite);
  const std::string mixing_csv = mixing_checks(suite);
  rng_checks(suite, seed);
  snake_invariant_checks(suite, seed);
  landscape_frozen_checks(suite);
  consistency_checks(suite, seed);
  sparse_hitting_checks(suite);
  const auto [adversary_csv, adversary_report] = adversary_checks(suite);
  const std::string solver_csv = solver_checks(suite, seed);
  const std::string er_csv = er_checks(suite, seed);
  tv_chain_checks(suite, seed);
  config_checks(suite);

  suite.report += suite.ok ? "selftest PASS\n" : "selftest FAIL\n";

  SelftestResult result;
  result.ok = suite.ok;
  result.report = suite.report;
  result.artifacts.push_back({"mixing.csv", mixing_csv});
  result.artifacts.push_back({"adversary_pairs.csv", adversary_csv});
  result.artifacts.push_back({"adversary_report.txt", adversary_report});
  result.artifacts.push_back({"solver_trials.csv", solver_csv});
  result.artifacts.push_back({"er_generators.csv", er_csv});
  return result;
}

}  // namespace snakelab
