#include <cmath>
#include <sstream>

#include "doctest.h"
#include "snakelab/config.hpp"
#include "snakelab/errors.hpp"
#include "snakelab/experiments.hpp"
#include "snakelab/solvers.hpp"

using namespace snakelab;

TEST_CASE("size ranges parse inclusively") {
  CHECK(parse_size_range("10:40:5") == std::vector<unsigned>{10, 15, 20, 25, 30, 35, 40});
  CHECK(parse_size_range("8") == std::vector<unsigned>{8});
  CHECK(parse_size_range("3:4:1") == std::vector<unsigned>{3, 4});
  CHECK_THROWS_AS(parse_size_range("10:40"), std::invalid_argument);
  CHECK_THROWS_AS(parse_size_range("9:3:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_size_range("1:9:0"), std::invalid_argument);
}

TEST_CASE("families build the expected graphs") {
  std::vector<FamilyMember> cubes = build_family("hypercube", {3, 4});
  REQUIRE(cubes.size() == 2);
  CHECK(cubes[0].graph->vertex_count() == 8);
  CHECK(cubes[1].graph->vertex_count() == 16);
  CHECK(cubes[0].family == "hypercube");

  CHECK(build_family("torus2", {6})[0].graph->vertex_count() == 36);
  CHECK(build_family("torus3", {3})[0].graph->vertex_count() == 27);
  CHECK(build_family("cycle", {12})[0].graph->vertex_count() == 12);
  CHECK_THROWS(build_family("klein_bottle", {4}));

  std::vector<FamilyMember> cayley = build_family("random_cayley", {3}, "symmetric(4)", 5);
  CHECK(cayley[0].graph->vertex_count() == 24);
}

TEST_CASE("solver names round-trip") {
  CHECK(parse_solver("steepest") == SolverKind::SteepestDescent);
  CHECK(parse_solver("aldous") == SolverKind::Aldous);
  CHECK(to_string(SolverKind::Aldous) == "aldous");
  CHECK(parse_solver(to_string(SolverKind::SteepestDescent)) == SolverKind::SteepestDescent);
  CHECK_THROWS_AS(parse_solver("newton"), std::invalid_argument);
}

TEST_CASE("query experiments solve every fresh instance") {
  QueryExperimentOptions options;
  options.trials = 4;
  options.seed = 2;
  std::vector<FamilyMember> members = build_family("torus2", {6, 8});
  std::vector<QueryTrialRow> rows = run_query_experiment(members, options);
  REQUIRE(rows.size() == 8);
  for (const QueryTrialRow& row : rows) {
    CHECK(row.answer_correct);
    CHECK(row.queries >= 1);
    CHECK(row.queries <= row.n);
  }
  // Same options replay byte-for-byte.
  CHECK(query_rows_csv(run_query_experiment(members, options)) == query_rows_csv(rows));

  std::vector<QuerySummaryRow> summary = summarize_query_experiment(rows);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].trials == 4);
  CHECK(summary[0].n == 36);
  CHECK(summary[1].n == 64);
  CHECK(summary[0].queries_median <= summary[0].queries_max);
  CHECK(summary[0].d == 6);  // torus diameter drives the bound
  CHECK(summary[0].lower_bound_rls ==
        doctest::Approx(lower_bound_formula(36, 6.0).rls).epsilon(1e-12));

  std::string csv = query_rows_csv(rows);
  CHECK(csv.rfind("family,param,N,d,degree,solver,seed,trial,queries,answer_correct\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == rows.size() + 1);
}

TEST_CASE("steepest descent runs also verify their answers") {
  QueryExperimentOptions options;
  options.solver = SolverKind::SteepestDescent;
  options.trials = 5;
  options.seed = 3;
  std::vector<QueryTrialRow> rows = run_query_experiment(build_family("cycle", {16}), options);
  REQUIRE(rows.size() == 5);
  for (const QueryTrialRow& row : rows) CHECK(row.answer_correct);
}

TEST_CASE("log-log slope on an exact power law") {
  CHECK(log_log_slope({4.0, 16.0, 64.0}, {2.0, 4.0, 8.0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(log_log_slope({2.0, 4.0}, {3.0, 9.0}) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK_THROWS(log_log_slope({1.0}, {1.0}));
  CHECK_THROWS(log_log_slope({1.0, 2.0}, {0.0, 1.0}));
}

TEST_CASE("plot data uses one hash header and aligned numeric rows") {
  QueryExperimentOptions options;
  options.trials = 2;
  options.seed = 4;
  std::vector<QueryTrialRow> rows = run_query_experiment(build_family("torus2", {6}), options);
  DataTable table = summary_table(summarize_query_experiment(rows));
  REQUIRE(table.rows.size() == 1);

  std::string text = emit_plot_data(table, {"N", "queries_median", "lower_bound_rls"});
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  CHECK(header == "# N queries_median lower_bound_rls");
  double n = 0.0, med = 0.0, rls = 0.0;
  in >> n >> med >> rls;
  CHECK(n == 36.0);
  CHECK(med > 0.0);
  CHECK(rls == doctest::Approx(lower_bound_formula(36, 6.0).rls).epsilon(1e-12));
  std::string rest;
  in >> rest;
  CHECK(rest.empty());  // exactly one data line for one row

  CHECK_THROWS_AS(emit_plot_data(table, {"unknown_column"}), std::invalid_argument);
  CHECK_THROWS_AS(emit_plot_data(table, {}), std::invalid_argument);
  CHECK_THROWS_AS(emit_plot_data(DataTable{}, {"N"}), std::invalid_argument);
}

TEST_CASE("config text round-trips field for field") {
  ExperimentConfig cfg;
  cfg.family = "hypercube";
  cfg.n = 4;
  cfg.method = "lazy_walk";
  cfg.s = 3;
  cfg.ell = 5;
  cfg.eps = 0.25;
  cfg.trials = 7;
  cfg.seed = 99;
  cfg.outdir = "results";
  ExperimentConfig back = ExperimentConfig::parse(cfg.to_text());
  CHECK(back.family == cfg.family);
  CHECK(back.n == cfg.n);
  CHECK(back.method == cfg.method);
  CHECK(back.s == cfg.s);
  CHECK(back.ell == cfg.ell);
  CHECK(back.eps == doctest::Approx(cfg.eps).epsilon(1e-15));
  CHECK(back.trials == cfg.trials);
  CHECK(back.seed == cfg.seed);
  CHECK(back.outdir == cfg.outdir);
  CHECK(back.to_text() == cfg.to_text());
}

TEST_CASE("config rejects unknown keys and sections") {
  CHECK_THROWS_AS(ExperimentConfig::parse("[graph]\nfamly = torus2\n"), ValidationError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[grph]\nfamily = torus2\n"), ValidationError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[run]\ntrials = banana\n"), ValidationError);
  ExperimentConfig ok = ExperimentConfig::parse("# comment only\n");
  CHECK(ok.family == "torus2");
}

TEST_CASE("config builds graphs and snake parameters") {
  ExperimentConfig cfg;
  cfg.family = "hypercube";
  cfg.n = 3;
  auto q3 = cfg.build_graph();
  CHECK(q3->vertex_count() == 8);
  ChunkDistribution ds = cfg.build_chunks(*q3);
  CHECK(ds.delta == doctest::Approx(0.125).epsilon(1e-12));
  SnakeParams params = cfg.snake_params(*q3);
  CHECK(params.s == 2);
  CHECK(params.ell == 1);  // floor(sqrt(8)/2)

  ExperimentConfig cayley;
  cayley.family = "cayley";
  cayley.group = "cyclic(8)";
  cayley.generators = "1";
  auto c8 = cayley.build_graph();
  CHECK(c8->vertex_count() == 8);
  CHECK(c8->degree() == 2);  // generator and its inverse

  ExperimentConfig explicit_ell = cfg;
  explicit_ell.ell = 4;
  explicit_ell.eps = 0.5;
  SnakeParams overridden = explicit_ell.snake_params(*q3);
  CHECK(overridden.ell == 4);
  CHECK(overridden.eps == doctest::Approx(0.5).epsilon(1e-15));
}
