#include "snakelab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "snakelab/errors.hpp"
#include "snakelab/oracle.hpp"
#include "snakelab/rng.hpp"
#include "snakelab/solvers.hpp"

namespace snakelab {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

unsigned parse_unsigned(std::string_view text) {
  unsigned value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

std::vector<FamilyMember> build_family(const std::string& family,
                                       const std::vector<unsigned>& params,
                                       const std::string& group_spec, std::uint64_t seed) {
  if (params.empty()) throw std::invalid_argument("build_family: empty parameter list");
  std::vector<FamilyMember> members;
  for (unsigned param : params) {
    FamilyMember member;
    member.family = family;
    member.param = param;
    if (family == "hypercube") {
      member.graph = std::make_shared<const VertexTransitiveGraph>(preset_hypercube(param));
    } else if (family == "torus2") {
      member.graph = std::make_shared<const VertexTransitiveGraph>(preset_torus(param, 2));
    } else if (family == "torus3") {
      member.graph = std::make_shared<const VertexTransitiveGraph>(preset_torus(param, 3));
    } else if (family == "cycle") {
      member.graph = std::make_shared<const VertexTransitiveGraph>(preset_cycle(param));
    } else if (family == "random_cayley") {
      if (group_spec.empty()) {
        throw std::invalid_argument("build_family: random_cayley needs a group spec");
      }
      member.graph = std::make_shared<const VertexTransitiveGraph>(preset_random_cayley(
          GroupSpec::parse(group_spec), param, derive_seed(seed, param)));
    } else {
      throw std::invalid_argument("build_family: unknown family \"" + family + "\"");
    }
    members.push_back(std::move(member));
  }
  return members;
}

std::vector<unsigned> parse_size_range(const std::string& text) {
  const std::size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {parse_unsigned(text)};
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw std::invalid_argument("size range must be lo:hi:step or a single number, got \"" +
                                text + "\"");
  }
  const unsigned lo = parse_unsigned(std::string_view(text).substr(0, c1));
  const unsigned hi = parse_unsigned(std::string_view(text).substr(c1 + 1, c2 - c1 - 1));
  const unsigned step = parse_unsigned(std::string_view(text).substr(c2 + 1));
  if (step == 0 || hi < lo) throw std::invalid_argument("bad size range \"" + text + "\"");
  std::vector<unsigned> out;
  for (unsigned v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

SolverKind parse_solver(const std::string& name) {
  if (name == "steepest") return SolverKind::SteepestDescent;
  if (name == "aldous") return SolverKind::Aldous;
  throw std::invalid_argument("unknown solver \"" + name + "\" (want steepest|aldous)");
}

std::string to_string(SolverKind kind) {
  return kind == SolverKind::SteepestDescent ? "steepest" : "aldous";
}

std::vector<QueryTrialRow> run_query_experiment(const std::vector<FamilyMember>& members,
                                                const QueryExperimentOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("run_query_experiment: zero trials");
  std::vector<QueryTrialRow> rows;
  rows.reserve(members.size() * options.trials);

  for (std::size_t mi = 0; mi < members.size(); ++mi) {
    const FamilyMember& member = members[mi];
    const VertexTransitiveGraph& graph = *member.graph;
    const unsigned s = std::min<unsigned>(options.s, graph.diameter());
    const SnakeParams params = SnakeParams::scaled(graph, s, options.c_ell);
    const ChunkMethod method =
        s == graph.diameter() && options.method == ChunkMethod::UniformBall
            ? ChunkMethod::UniformAll
            : options.method;
    const ChunkDistribution ds = build_chunk_distribution(graph, s, method);
    const SnakeSampler sampler(graph, ds, params);
    const std::uint64_t member_seed = derive_seed(options.seed, mi);

    for (unsigned trial = 0; trial < options.trials; ++trial) {
      QueryTrialRow row;
      row.family = member.family;
      row.param = member.param;
      row.n = graph.vertex_count();
      row.d = graph.diameter();
      row.degree = graph.degree();
      row.solver = to_string(options.solver);
      row.seed = derive_seed(member_seed, trial);
      row.trial = trial;

      Rng rng(row.seed);
      const Snake snake = sampler.sample(graph.base_vertex(), rng);
      LandscapeOracle oracle = make_instance(graph, snake);
      SolveResult res;
      if (options.solver == SolverKind::SteepestDescent) {
        const Vertex start = static_cast<Vertex>(rng.next_below(graph.vertex_count()));
        res = steepest_descent(graph, oracle, start);
      } else {
        const std::uint64_t samples = options.aldous_samples != 0
                                          ? options.aldous_samples
                                          : aldous_default_samples(graph);
        res = aldous_solver(graph, oracle, samples, rng);
      }
      const SnakeFunction raw = materialize_landscape(graph, snake);
      row.queries = res.queries;
      row.answer_correct = res.vertex == snake.tail_end() &&
                           verify_local_min(graph, [&raw](Vertex v) { return raw(v); },
                                            res.vertex);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<QuerySummaryRow> summarize_query_experiment(const std::vector<QueryTrialRow>& rows) {
  std::vector<QuerySummaryRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].family == rows[i].family &&
           rows[j].param == rows[i].param) {
      ++j;
    }
    std::vector<double> queries;
    double sum = 0.0, mx = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      queries.push_back(static_cast<double>(rows[k].queries));
      sum += queries.back();
      mx = std::max(mx, queries.back());
    }
    std::sort(queries.begin(), queries.end());
    QuerySummaryRow row;
    row.family = rows[i].family;
    row.param = rows[i].param;
    row.n = rows[i].n;
    row.d = rows[i].d;
    row.degree = rows[i].degree;
    row.trials = static_cast<unsigned>(queries.size());
    row.queries_median = queries.size() % 2 == 1
                             ? queries[queries.size() / 2]
                             : 0.5 * (queries[queries.size() / 2 - 1] +
                                      queries[queries.size() / 2]);
    row.queries_mean = sum / queries.size();
    row.queries_max = mx;
    const LowerBoundFormula lb = lower_bound_formula(row.n, row.d);
    row.lower_bound_rls = lb.rls;
    row.lower_bound_qls = lb.qls;
    out.push_back(std::move(row));
    i = j;
  }
  return out;
}

double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("log_log_slope: need at least two aligned points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw std::invalid_argument("log_log_slope: points must be positive");
    }
    const double lx = std::log2(xs[i]);
    const double ly = std::log2(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(xs.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("log_log_slope: degenerate x values");
  return (n * sxy - sx * sy) / denom;
}

std::string query_rows_csv(const std::vector<QueryTrialRow>& rows) {
  std::string out = "family,param,N,d,degree,solver,seed,trial,queries,answer_correct\n";
  for (const QueryTrialRow& row : rows) {
    out += row.family + "," + std::to_string(row.param) + "," + std::to_string(row.n) + "," +
           std::to_string(row.d) + "," + std::to_string(row.degree) + "," + row.solver + "," +
           std::to_string(row.seed) + "," + std::to_string(row.trial) + "," +
           std::to_string(row.queries) + "," + (row.answer_correct ? "1" : "0") + "\n";
  }
  return out;
}

DataTable summary_table(const std::vector<QuerySummaryRow>& rows) {
  DataTable table;
  table.columns = {"param",        "N",           "d",
                   "degree",       "trials",      "queries_median",
                   "queries_mean", "queries_max", "lower_bound_rls",
                   "lower_bound_qls"};
  for (const QuerySummaryRow& row : rows) {
    table.rows.push_back({static_cast<double>(row.param), static_cast<double>(row.n),
                          static_cast<double>(row.d), static_cast<double>(row.degree),
                          static_cast<double>(row.trials), row.queries_median, row.queries_mean,
                          row.queries_max, row.lower_bound_rls, row.lower_bound_qls});
  }
  return table;
}

std::string emit_plot_data(const DataTable& table, const std::vector<std::string>& columns) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: empty table");
  if (columns.empty()) throw std::invalid_argument("emit_plot_data: no columns selected");
  std::vector<std::size_t> idx;
  for (const std::string& name : columns) {
    auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end()) {
      throw std::invalid_argument("emit_plot_data: unknown column \"" + name + "\"");
    }
    idx.push_back(static_cast<std::size_t>(it - table.columns.begin()));
  }
  std::string out = "#";
  for (const std::string& name : columns) out += " " + name;
  out += "\n";
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k > 0) out += " ";
      out += fmt(row[idx[k]]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace snakelab
