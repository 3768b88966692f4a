#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "snakelab/distribution.hpp"
#include "snakelab/graph.hpp"
#include "snakelab/snake.hpp"

namespace snakelab {

struct FamilyMember {
  std::string family;
  unsigned param = 0;
  std::shared_ptr<const VertexTransitiveGraph> graph;
};

/// Families: "hypercube" (Q_param), "torus2"/"torus3" (Z_param^2 or ^3),
/// "cycle" (C_param), and "random_cayley" (param random generators on the
/// group given by `group_spec`, connectivity retried from `seed`).
std::vector<FamilyMember> build_family(const std::string& family,
                                       const std::vector<unsigned>& params,
                                       const std::string& group_spec = "",
                                       std::uint64_t seed = 0);

/// "lo:hi:step" inclusive, or a single number.
std::vector<unsigned> parse_size_range(const std::string& text);

enum class SolverKind { SteepestDescent, Aldous };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);

struct QueryExperimentOptions {
  SolverKind solver = SolverKind::Aldous;
  unsigned trials = 50;
  std::uint64_t seed = 1;
  unsigned s = 2;
  double c_ell = 1.0;
  ChunkMethod method = ChunkMethod::UniformBall;
  std::uint64_t aldous_samples = 0;  ///< 0 -> ceil(sqrt(N*degree))
};

struct QueryTrialRow {
  std::string family;
  unsigned param = 0;
  std::uint64_t n = 0;
  unsigned d = 0;
  unsigned degree = 0;
  std::string solver;
  std::uint64_t seed = 0;  ///< per-trial derived seed
  unsigned trial = 0;
  std::uint64_t queries = 0;
  bool answer_correct = false;
};

/// One fresh snake instance per trial; solves it with the counted oracle and
/// verifies the answer post hoc against the raw landscape.
std::vector<QueryTrialRow> run_query_experiment(const std::vector<FamilyMember>& members,
                                                const QueryExperimentOptions& options);

struct QuerySummaryRow {
  std::string family;
  unsigned param = 0;
  std::uint64_t n = 0;
  unsigned d = 0;
  unsigned degree = 0;
  unsigned trials = 0;
  double queries_median = 0.0;  ///< midpoint average for even counts
  double queries_mean = 0.0;
  double queries_max = 0.0;
  double lower_bound_rls = 0.0;
  double lower_bound_qls = 0.0;
};

std::vector<QuerySummaryRow> summarize_query_experiment(const std::vector<QueryTrialRow>& rows);

/// Least-squares slope of log2(y) against log2(x).
double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Schema: family,param,N,d,degree,solver,seed,trial,queries,answer_correct
std::string query_rows_csv(const std::vector<QueryTrialRow>& rows);

/// Numeric table for plot-data emission.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

DataTable summary_table(const std::vector<QuerySummaryRow>& rows);

/// Whitespace-separated numeric columns under a single `#`-prefixed header
/// line; unknown or empty column selections are usage errors.
std::string emit_plot_data(const DataTable& table, const std::vector<std::string>& columns);

}  // namespace snakelab
