#include "snakelab/snake.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "snakelab/errors.hpp"

namespace snakelab {

namespace {

constexpr std::size_t kNoSupportSlot = std::numeric_limits<std::size_t>::max();

/// Dense "last index" scratch that resets in O(1) via stamping; used by the
/// exact-consistency enumeration where a fresh map per tail tuple would be
/// far too slow.
struct StampedLastIndex {
  std::vector<std::uint32_t> stamp;
  std::vector<std::int64_t> value;
  std::uint32_t cur = 0;

  void init(std::size_t n) {
    stamp.assign(n, 0);
    value.assign(n, -1);
    cur = 0;
  }
  void clear() { ++cur; }
  void raise(Vertex v, std::int64_t i) {
    if (stamp[v] != cur) {
      stamp[v] = cur;
      value[v] = i;
    } else if (value[v] < i) {
      value[v] = i;
    }
  }
  std::int64_t get(Vertex v) const { return stamp[v] == cur ? value[v] : -1; }
};

double wilson_bound(double p, std::uint64_t n, bool upper) {
  if (n == 0) return upper ? 1.0 : 0.0;
  const double z = 1.959963984540054;  // 95% two-sided normal quantile
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  const double v = (center + (upper ? spread : -spread)) / denom;
  return std::min(1.0, std::max(0.0, v));
}

void fill_consistency_interval(ConsistencyEstimate& est) {
  if (est.exact) {
    est.std_err = 0.0;
    est.wilson_low = est.probability;
    est.wilson_high = est.probability;
  } else {
    est.std_err = std::sqrt(est.probability * (1.0 - est.probability) /
                            static_cast<double>(est.trials));
    est.wilson_low = wilson_bound(est.probability, est.trials, false);
    est.wilson_high = wilson_bound(est.probability, est.trials, true);
  }
}

}  // namespace

std::uint64_t enumeration_budget(std::uint64_t fallback) {
  const char* env = std::getenv("SNAKELAB_BUDGET");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t value = 0;
  const char* end = env;
  while (*end != '\0') ++end;
  auto res = std::from_chars(env, end, value);
  if (res.ec != std::errc{} || res.ptr != end || value == 0) {
    throw std::invalid_argument("SNAKELAB_BUDGET must be a positive integer, got \"" +
                                std::string(env) + "\"");
  }
  return value;
}

SnakeParams SnakeParams::scaled(const VertexTransitiveGraph& graph, unsigned s, double c_ell) {
  if (c_ell <= 0.0) throw std::invalid_argument("SnakeParams::scaled: c_ell must be positive");
  SnakeParams p;
  p.s = s;
  const double raw = std::sqrt(static_cast<double>(graph.vertex_count())) / (c_ell * s);
  p.ell = raw < 1.0 ? 1u : static_cast<unsigned>(raw);
  p.validate();
  return p;
}

void SnakeParams::validate() const {
  if (s == 0) throw std::invalid_argument("SnakeParams: s must be at least 1");
  if (ell == 0) throw std::invalid_argument("SnakeParams: ell must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("SnakeParams: eps must be positive");
  if (!(consist_threshold > 0.0 && consist_threshold <= 1.0)) {
    throw std::invalid_argument("SnakeParams: consist_threshold must be in (0,1]");
  }
  if (!(good_prob_threshold > 0.0 && good_prob_threshold <= 1.0)) {
    throw std::invalid_argument("SnakeParams: good_prob_threshold must be in (0,1]");
  }
}

std::string serialize(const Snake& snake) {
  std::string out = "snake v1 L=" + std::to_string(snake.length()) +
                    " s=" + std::to_string(snake.s) + "\n";
  for (Vertex v : snake.vertices) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

Snake parse_snake(std::string_view text, const VertexTransitiveGraph* graph) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    if (nl > pos) lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw ValidationError("snake parse error: empty input");

  std::uint64_t length = 0, stride = 0;
  {
    const std::string_view h = lines[0];
    const std::size_t lpos = h.find("L=");
    const std::size_t spos = h.find(" s=");
    if (h.substr(0, 9) != "snake v1 " || lpos == std::string_view::npos ||
        spos == std::string_view::npos) {
      throw ValidationError("snake parse error: bad header \"" + std::string(h) + "\"");
    }
    auto parse_num = [&](std::string_view t, std::uint64_t& out) {
      auto res = std::from_chars(t.data(), t.data() + t.size(), out);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw ValidationError("snake parse error: bad number \"" + std::string(t) + "\"");
      }
    };
    parse_num(h.substr(lpos + 2, spos - (lpos + 2)), length);
    parse_num(h.substr(spos + 3), stride);
  }
  if (stride == 0 || length == 0 || length % stride != 0) {
    throw ValidationError("snake parse error: L=" + std::to_string(length) +
                          " must be a positive multiple of s=" + std::to_string(stride));
  }
  if (lines.size() != length + 2) {
    throw ValidationError("snake parse error: expected " + std::to_string(length + 1) +
                          " vertex lines, got " + std::to_string(lines.size() - 1));
  }

  Snake snake;
  snake.s = static_cast<unsigned>(stride);
  snake.vertices.reserve(length + 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::uint64_t v = 0;
    auto res = std::from_chars(lines[i].data(), lines[i].data() + lines[i].size(), v);
    if (res.ec != std::errc{} || res.ptr != lines[i].data() + lines[i].size()) {
      throw ValidationError("snake parse error: bad vertex line \"" + std::string(lines[i]) +
                            "\"");
    }
    snake.vertices.push_back(static_cast<Vertex>(v));
  }

  if (graph != nullptr) {
    for (std::size_t i = 0; i < snake.vertices.size(); ++i) {
      if (snake.vertices[i] >= graph->vertex_count()) {
        throw ValidationError("snake parse error: vertex " + std::to_string(snake.vertices[i]) +
                              " out of range");
      }
      if (i > 0 && snake.vertices[i] != snake.vertices[i - 1] &&
          !graph->is_edge(snake.vertices[i - 1], snake.vertices[i])) {
        throw ValidationError("snake parse error: step " + std::to_string(i) +
                              " is neither a loop nor an edge");
      }
    }
  }
  return snake;
}

SnakeSampler::SnakeSampler(const VertexTransitiveGraph& graph, const ChunkDistribution& ds,
                           const SnakeParams& params)
    : graph_(&graph), ds_(&ds), params_(params) {
  params_.validate();
  if (ds.radius != params_.s) {
    throw std::invalid_argument("SnakeSampler: seed distribution radius " +
                                std::to_string(ds.radius) + " does not match s=" +
                                std::to_string(params_.s));
  }
  if (graph.kind() != VertexTransitiveGraph::Kind::Cayley &&
      ds.method != ChunkMethod::UniformAll) {
    throw std::invalid_argument(
        "SnakeSampler: non-Cayley graphs support only the uniform_all seed distribution");
  }

  support_ = ds.dist.support();
  support_index_.assign(graph.vertex_count(), kNoSupportSlot);
  double running = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const Vertex g = support_[i];
    weights_.push_back(ds.dist[g]);
    running += ds.dist[g];
    cumulative_.push_back(running);
    support_index_[g] = i;
    paths_.push_back(graph.extended_shortest_path(g, params_.s));
  }
  cumulative_.back() = running;  // guard against accumulated rounding
}

std::size_t SnakeSampler::support_index(Vertex seed) const {
  if (seed >= support_index_.size() || support_index_[seed] == kNoSupportSlot) {
    throw std::invalid_argument("seed " + std::to_string(seed) +
                                " is not in the chunk distribution support");
  }
  return support_index_[seed];
}

Vertex SnakeSampler::sample_seed(Rng& rng) const { return support_[rng.next_index(cumulative_)]; }

Snake SnakeSampler::assemble(Vertex x0, const std::vector<Vertex>& seeds) const {
  if (x0 >= graph_->vertex_count()) throw std::invalid_argument("assemble: head out of range");
  if (seeds.size() != params_.ell + 1) {
    throw std::invalid_argument("assemble: expected " + std::to_string(params_.ell + 1) +
                                " seeds, got " + std::to_string(seeds.size()));
  }
  Snake snake;
  snake.s = params_.s;
  snake.seeds = seeds;
  snake.vertices.reserve(params_.length() + 1);
  snake.vertices.push_back(x0);
  Vertex chunk_start = x0;
  for (Vertex seed : seeds) {
    const std::vector<Vertex>& path = paths_[support_index(seed)];
    for (Vertex u : path) {
      snake.vertices.push_back(graph_->automorphism_apply(chunk_start, u));
    }
    chunk_start = snake.vertices.back();
  }
  return snake;
}

Snake SnakeSampler::sample(Vertex x0, Rng& rng) const {
  std::vector<Vertex> seeds(params_.ell + 1);
  for (Vertex& s : seeds) s = sample_seed(rng);
  return assemble(x0, seeds);
}

SnakeSampler::FlickResult SnakeSampler::flick(const Snake& x, Rng& rng) const {
  if (x.seeds.size() != params_.ell + 1 || x.s != params_.s) {
    throw std::invalid_argument("flick: snake was not produced by a sampler with these params");
  }
  const unsigned m = 1 + static_cast<unsigned>(rng.next_below(params_.ell));
  std::vector<Vertex> seeds(x.seeds.begin(), x.seeds.begin() + m);
  for (unsigned k = m; k <= params_.ell; ++k) seeds.push_back(sample_seed(rng));
  FlickResult out;
  out.j = m * params_.s;
  out.snake = assemble(x.head(), seeds);
  return out;
}

SnakeFunction materialize_landscape(const VertexTransitiveGraph& graph, const Snake& snake) {
  const std::size_t n = graph.vertex_count();
  const auto length = static_cast<std::int64_t>(snake.length());
  SnakeFunction f;
  f.values.resize(n);
  if (snake.head() == graph.base_vertex()) {
    const std::vector<unsigned>& dist = graph.base_distances();
    for (Vertex v = 0; v < n; ++v) f.values[v] = length + dist[v];
  } else {
    const std::vector<unsigned> dist = graph.distances_from(snake.head());
    for (Vertex v = 0; v < n; ++v) f.values[v] = length + dist[v];
  }
  for (std::size_t i = 0; i < snake.vertices.size(); ++i) {
    f.values[snake.vertices[i]] = length - static_cast<std::int64_t>(i);
  }
  return f;
}

std::int64_t landscape_value(const VertexTransitiveGraph& graph, const Snake& snake, Vertex v) {
  const auto length = static_cast<std::int64_t>(snake.length());
  for (std::size_t i = snake.vertices.size(); i-- > 0;) {
    if (snake.vertices[i] == v) return length - static_cast<std::int64_t>(i);
  }
  return length + graph.distance(snake.head(), v);
}

std::vector<std::int64_t> last_visit_index(const Snake& snake, std::size_t n) {
  std::vector<std::int64_t> last(n, -1);
  for (std::size_t i = 0; i < snake.vertices.size(); ++i) {
    last[snake.vertices[i]] = static_cast<std::int64_t>(i);
  }
  return last;
}

int set_indicator(const Snake& snake, Vertex v) {
  for (Vertex u : snake.vertices) {
    if (u == v) return 1;
  }
  return 0;
}

DisagreementReport find_disagreements(const VertexTransitiveGraph& graph, const Snake& x,
                                      const Snake& y, bool check_equivalence) {
  if (x.head() != y.head() || x.length() != y.length()) {
    throw std::invalid_argument("find_disagreements: snakes must share head and length");
  }
  const std::size_t n = graph.vertex_count();
  const std::vector<std::int64_t> last_x = last_visit_index(x, n);
  const std::vector<std::int64_t> last_y = last_visit_index(y, n);

  DisagreementReport report;
  for (Vertex v = 0; v < n; ++v) {
    if (last_x[v] >= 0 && last_y[v] >= 0 && last_x[v] != last_y[v]) {
      report.vertices.push_back(v);
    }
  }
  report.consistent = report.vertices.empty();
  report.tails_distinct = x.tail_end() != y.tail_end();

  if (check_equivalence && report.consistent) {
    const SnakeFunction fx = materialize_landscape(graph, x);
    const SnakeFunction fy = materialize_landscape(graph, y);
    report.equivalence_checked = true;
    report.equivalence_holds = true;
    for (Vertex v = 0; v < n; ++v) {
      const bool values_differ = fx(v) != fy(v);
      const bool membership_differs = (last_x[v] >= 0) != (last_y[v] >= 0);
      if (values_differ != membership_differs) {
        report.equivalence_holds = false;
        break;
      }
    }
  }
  return report;
}

ConsistencyEstimate consistency_probability_exact(const SnakeSampler& sampler, const Snake& x,
                                                  std::uint64_t budget) {
  const SnakeParams& params = sampler.params();
  if (x.s != params.s || x.length() != params.length()) {
    throw std::invalid_argument("consistency: snake shape does not match sampler params");
  }
  const std::size_t n = sampler.graph().vertex_count();
  const std::size_t sup = sampler.support().size();
  const unsigned ell = params.ell;
  const unsigned s = params.s;

  double tuple_estimate = 0.0;
  for (unsigned w = 1; w <= ell; ++w) tuple_estimate += std::pow(static_cast<double>(sup), w);
  if (tuple_estimate > static_cast<double>(budget)) {
    throw SizeLimitError("exact consistency needs " + std::to_string(tuple_estimate) +
                         " tail tuples, budget is " + std::to_string(budget));
  }

  const std::vector<std::int64_t> last_x = last_visit_index(x, n);
  std::vector<Vertex> distinct_x;
  for (Vertex v = 0; v < n; ++v) {
    if (last_x[v] >= 0) distinct_x.push_back(v);
  }

  StampedLastIndex last_suffix;
  last_suffix.init(n);
  std::vector<std::int64_t> last_prefix(n, -1);

  double total = 0.0;
  std::uint64_t tuples = 0;

  for (unsigned m = 1; m <= ell; ++m) {
    // Last visit indices within the shared prefix x_0..x_{sm}.
    std::fill(last_prefix.begin(), last_prefix.end(), -1);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(s) * m; ++i) {
      last_prefix[x.vertices[i]] = static_cast<std::int64_t>(i);
    }

    const unsigned w = ell + 1 - m;
    std::vector<std::size_t> odo(w, 0);
    for (;;) {
      ++tuples;
      last_suffix.clear();
      double weight = 1.0;
      Vertex chunk_start = x.vertices[static_cast<std::size_t>(s) * m];
      std::int64_t index = static_cast<std::int64_t>(s) * m;
      for (unsigned c = 0; c < w; ++c) {
        weight *= sampler.support_weights()[odo[c]];
        Vertex z = chunk_start;
        for (Vertex u : sampler.seed_path(odo[c])) {
          z = sampler.graph().automorphism_apply(chunk_start, u);
          last_suffix.raise(z, ++index);
        }
        chunk_start = z;
      }

      bool consistent = true;
      for (Vertex v : distinct_x) {
        const std::int64_t ly = std::max(last_prefix[v], last_suffix.get(v));
        if (ly >= 0 && ly != last_x[v]) {
          consistent = false;
          break;
        }
      }
      if (consistent && chunk_start != x.tail_end()) total += weight;

      std::size_t pos = 0;
      while (pos < w && ++odo[pos] == sup) {
        odo[pos] = 0;
        ++pos;
      }
      if (pos == w) break;
    }
  }

  ConsistencyEstimate est;
  est.exact = true;
  est.trials = tuples;
  est.probability = total / ell;
  fill_consistency_interval(est);
  return est;
}

ConsistencyEstimate consistency_probability_mc(const SnakeSampler& sampler, const Snake& x,
                                               unsigned trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("consistency: zero trials");
  unsigned successes = 0;
  for (unsigned t = 0; t < trials; ++t) {
    const SnakeSampler::FlickResult fr = sampler.flick(x, rng);
    const DisagreementReport rep = find_disagreements(sampler.graph(), x, fr.snake, false);
    if (rep.consistent && rep.tails_distinct) ++successes;
  }
  ConsistencyEstimate est;
  est.exact = false;
  est.trials = trials;
  est.probability = static_cast<double>(successes) / trials;
  fill_consistency_interval(est);
  return est;
}

std::vector<double> seed_cover_probability(const VertexTransitiveGraph& graph,
                                           const ChunkDistribution& ds) {
  std::vector<double> cover(graph.vertex_count(), 0.0);
  for (Vertex g : ds.dist.support()) {
    std::vector<Vertex> path = graph.extended_shortest_path(g, ds.radius);
    std::sort(path.begin(), path.end());
    path.erase(std::unique(path.begin(), path.end()), path.end());
    for (Vertex u : path) cover[u] += ds.dist[g];
  }
  return cover;
}

SparsityResult sparsity_check(const VertexTransitiveGraph& graph,
                              const std::vector<double>& cover_prob, const Snake& x,
                              const SnakeParams& params, double eps) {
  if (cover_prob.size() != graph.vertex_count()) {
    throw std::invalid_argument("sparsity_check: cover table size mismatch");
  }
  if (x.s != params.s || x.length() != params.length()) {
    throw std::invalid_argument("sparsity_check: snake shape does not match params");
  }
  std::vector<Vertex> cover_support;
  for (Vertex u = 0; u < cover_prob.size(); ++u) {
    if (cover_prob[u] > 0.0) cover_support.push_back(u);
  }

  // score(v) = sum_k cover(sigma_{x_{sk}}^{-1} v), accumulated forward:
  // the mass of u lands on v = sigma_{x_{sk}}(u).
  std::vector<double> score(graph.vertex_count(), 0.0);
  for (unsigned k = 1; k <= params.ell; ++k) {
    const Vertex xk = x.vertices[static_cast<std::size_t>(params.s) * k];
    for (Vertex u : cover_support) {
      score[graph.automorphism_apply(xk, u)] += cover_prob[u];
    }
  }

  SparsityResult res;
  res.threshold = eps * params.ell;
  for (Vertex v = 0; v < score.size(); ++v) {
    if (score[v] > res.max_score) {
      res.max_score = score[v];
      res.argmax = v;
    }
  }
  res.sparse = res.max_score <= res.threshold;
  return res;
}

namespace {

constexpr std::size_t kTranslationCap = 1024;

/// Flat n*n table of sigma_x(v); exact tail subroutines build it once.
std::vector<Vertex> build_translation_table(const VertexTransitiveGraph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n > kTranslationCap) {
    throw SizeLimitError("translation table for " + std::to_string(n) +
                         " vertices exceeds the cap of " + std::to_string(kTranslationCap));
  }
  std::vector<Vertex> table(n * n);
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex v = 0; v < n; ++v) table[static_cast<std::size_t>(x) * n + v] =
        graph.automorphism_apply(x, v);
  }
  return table;
}

}  // namespace

HittingResult hitting_probabilities_exact(const SnakeSampler& sampler, const Snake& x,
                                          std::uint64_t budget) {
  const SnakeParams& params = sampler.params();
  if (x.s != params.s || x.length() != params.length()) {
    throw std::invalid_argument("hitting: snake shape does not match sampler params");
  }
  const std::size_t n = sampler.graph().vertex_count();
  const std::size_t sup = sampler.support().size();
  const unsigned ell = params.ell;

  const std::uint64_t per_pair = static_cast<std::uint64_t>(n) * sup * ell;
  if (per_pair > budget) {
    throw SizeLimitError("exact hitting DP costs " + std::to_string(per_pair) +
                         " per (vertex, flick) pair, budget is " + std::to_string(budget));
  }
  const std::vector<Vertex> table = build_translation_table(sampler.graph());

  std::vector<std::vector<Vertex>> seed_vertices(sup);
  for (std::size_t i = 0; i < sup; ++i) {
    seed_vertices[i] = sampler.seed_path(i);
    auto& sv = seed_vertices[i];
    std::sort(sv.begin(), sv.end());
    sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
  }

  HittingResult res;
  res.exact = true;
  res.per_vertex.assign(n, 0.0);

  std::vector<double> nu(n, 0.0), nu_next(n, 0.0);
  std::vector<Vertex> active, active_next;
  active.reserve(n);
  active_next.reserve(n);

  for (Vertex v = 0; v < n; ++v) {
    double hit_total = 0.0;
    for (unsigned m = 1; m <= ell; ++m) {
      const Vertex start = x.vertices[static_cast<std::size_t>(params.s) * m];
      nu[start] = 1.0;
      active.push_back(start);
      for (unsigned k = m; k <= ell; ++k) {
        for (Vertex w : active) {
          const double mass = nu[w];
          nu[w] = 0.0;
          if (mass == 0.0) continue;
          const Vertex* row = table.data() + static_cast<std::size_t>(w) * n;
          for (std::size_t i = 0; i < sup; ++i) {
            bool hits = false;
            for (Vertex u : seed_vertices[i]) {
              if (row[u] == v) {
                hits = true;
                break;
              }
            }
            if (hits) continue;  // this seed's chunk would visit v
            const Vertex z = row[sampler.support()[i]];
            if (nu_next[z] == 0.0) active_next.push_back(z);
            nu_next[z] += mass * sampler.support_weights()[i];
          }
        }
        active.clear();
        nu.swap(nu_next);
        active.swap(active_next);
      }
      double survive = 0.0;
      for (Vertex w : active) {
        survive += nu[w];
        nu[w] = 0.0;
      }
      active.clear();
      hit_total += 1.0 - survive;
    }
    res.per_vertex[v] = hit_total / ell;
  }

  for (Vertex v = 0; v < n; ++v) {
    if (res.per_vertex[v] > res.max_prob) {
      res.max_prob = res.per_vertex[v];
      res.argmax = v;
    }
  }
  return res;
}

HittingResult hitting_probabilities_mc(const SnakeSampler& sampler, const Snake& x,
                                       unsigned trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("hitting: zero trials");
  const std::size_t n = sampler.graph().vertex_count();
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;

  for (unsigned t = 0; t < trials; ++t) {
    const SnakeSampler::FlickResult fr = sampler.flick(x, rng);
    ++stamp;
    for (std::size_t i = fr.j + 1; i < fr.snake.vertices.size(); ++i) {
      const Vertex v = fr.snake.vertices[i];
      if (mark[v] != stamp) {
        mark[v] = stamp;
        ++counts[v];
      }
    }
  }

  HittingResult res;
  res.exact = false;
  res.per_vertex.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    res.per_vertex[v] = static_cast<double>(counts[v]) / trials;
    if (res.per_vertex[v] > res.max_prob) {
      res.max_prob = res.per_vertex[v];
      res.argmax = v;
    }
  }
  res.std_err = std::sqrt(res.max_prob * (1.0 - res.max_prob) / trials);
  return res;
}

SparseHittingReport sparse_implies_hitting_check(const SnakeSampler& sampler, const Snake& x,
                                                 double eps, std::uint64_t budget) {
  const std::vector<double> cover =
      seed_cover_probability(sampler.graph(), sampler.chunk_distribution());
  const SparsityResult sparse = sparsity_check(sampler.graph(), cover, x, sampler.params(), eps);

  SparseHittingReport rep;
  rep.eps = eps;
  rep.sparse_max = sparse.max_score;
  rep.sparse = sparse.sparse;
  const double n = static_cast<double>(sampler.graph().vertex_count());
  const double floor_eps = 2.0 * (sampler.params().length() - sampler.params().s) / n;
  rep.precondition_ok = rep.sparse && eps >= floor_eps;
  const HittingResult hitting = hitting_probabilities_exact(sampler, x, budget);
  rep.hitting_max = hitting.max_prob;
  rep.bound = 2.0 * eps;
  rep.exact = true;
  rep.holds = rep.hitting_max <= rep.bound + 1e-12;
  return rep;
}

MixingCheck chunk_position_mixing(const VertexTransitiveGraph& graph, const ChunkDistribution& ds,
                                  unsigned ell, unsigned t, std::uint64_t budget,
                                  std::uint64_t mc_seed) {
  if (ell == 0) throw std::invalid_argument("chunk_position_mixing: ell must be at least 1");
  const unsigned s = ds.radius;
  const unsigned length = s * (ell + 1);
  if (t < 1 || t > length) {
    throw std::invalid_argument("chunk_position_mixing: position " + std::to_string(t) +
                                " outside 1.." + std::to_string(length));
  }
  const std::size_t n = graph.vertex_count();
  const std::vector<Vertex> support = ds.dist.support();
  const unsigned chunks_before = (t - 1) / s;  // fully completed chunks
  const unsigned offset = t - chunks_before * s;

  std::vector<std::vector<Vertex>> paths;
  paths.reserve(support.size());
  for (Vertex g : support) paths.push_back(graph.extended_shortest_path(g, s));

  MixingCheck res;
  res.t = t;
  res.delta = ds.delta;

  const bool cayley = graph.kind() == VertexTransitiveGraph::Kind::Cayley;
  // For Cayley graphs the law of x_t from start x is the x-translate of the
  // law from the base vertex, so one start suffices; tv to uniform is
  // translation invariant.
  const std::size_t start_count = cayley ? 1 : n;
  const std::uint64_t exact_cost = static_cast<std::uint64_t>(start_count) *
                                   (chunks_before + 1) * n * support.size();

  if (exact_cost <= budget) {
    res.exact = true;
    std::vector<double> nu(n, 0.0), nu_next(n, 0.0), law(n, 0.0);
    const VertexDistribution uniform = VertexDistribution::uniform(n);
    for (std::size_t si = 0; si < start_count; ++si) {
      const Vertex start = cayley ? graph.base_vertex() : static_cast<Vertex>(si);
      std::fill(nu.begin(), nu.end(), 0.0);
      nu[start] = 1.0;
      for (unsigned c = 0; c < chunks_before; ++c) {
        std::fill(nu_next.begin(), nu_next.end(), 0.0);
        for (Vertex w = 0; w < n; ++w) {
          if (nu[w] == 0.0) continue;
          for (std::size_t i = 0; i < support.size(); ++i) {
            nu_next[graph.automorphism_apply(w, support[i])] += nu[w] * ds.dist[support[i]];
          }
        }
        nu.swap(nu_next);
      }
      std::fill(law.begin(), law.end(), 0.0);
      for (Vertex w = 0; w < n; ++w) {
        if (nu[w] == 0.0) continue;
        for (std::size_t i = 0; i < support.size(); ++i) {
          law[graph.automorphism_apply(w, paths[i][offset - 1])] += nu[w] * ds.dist[support[i]];
        }
      }
      const double tv = tv_distance(VertexDistribution(law), uniform);
      if (tv > res.max_tv) {
        res.max_tv = tv;
        res.argmax_start = start;
      }
    }
    return res;
  }

  if (!cayley) {
    throw SizeLimitError("chunk_position_mixing: exact check needs " +
                         std::to_string(exact_cost) + " operations (budget " +
                         std::to_string(budget) + ") and non-Cayley graphs have no sampling "
                         "shortcut across starts");
  }

  // Monte Carlo fallback from the base vertex (valid for Cayley graphs).
  res.exact = false;
  res.trials = 20000;
  std::vector<double> cumulative;
  double running = 0.0;
  for (Vertex g : support) {
    running += ds.dist[g];
    cumulative.push_back(running);
  }
  Rng rng(derive_seed(mc_seed, 0x6d6978u));
  std::vector<double> law(n, 0.0);
  for (std::uint64_t trial = 0; trial < res.trials; ++trial) {
    Vertex w = graph.base_vertex();
    for (unsigned c = 0; c < chunks_before; ++c) {
      w = graph.automorphism_apply(w, support[rng.next_index(cumulative)]);
    }
    const std::size_t i = rng.next_index(cumulative);
    law[graph.automorphism_apply(w, paths[i][offset - 1])] += 1.0 / res.trials;
  }
  res.max_tv = tv_distance(VertexDistribution(law), VertexDistribution::uniform(n));
  res.argmax_start = graph.base_vertex();
  res.std_err = 0.5 * std::sqrt(static_cast<double>(n) / res.trials);
  return res;
}

GoodnessReport classify_goodness(const SnakeSampler& sampler, const Snake& x,
                                 std::uint64_t budget, unsigned mc_trials,
                                 std::uint64_t mc_seed) {
  GoodnessReport rep;
  rep.eps = sampler.params().eps;
  try {
    rep.consistency = consistency_probability_exact(sampler, x, budget);
  } catch (const SizeLimitError&) {
    Rng rng(derive_seed(mc_seed, 0));
    rep.consistency = consistency_probability_mc(sampler, x, mc_trials, rng);
  }
  try {
    rep.hitting = hitting_probabilities_exact(sampler, x, budget);
  } catch (const SizeLimitError&) {
    Rng rng(derive_seed(mc_seed, 1));
    rep.hitting = hitting_probabilities_mc(sampler, x, mc_trials, rng);
  }
  rep.good = rep.consistency.probability >= sampler.params().consist_threshold &&
             rep.hitting.max_prob <= rep.eps + 1e-12;
  return rep;
}

GoodnessRateResult goodness_rate(const SnakeSampler& sampler, unsigned snake_trials,
                                 std::uint64_t seed, std::uint64_t budget, unsigned mc_trials) {
  if (snake_trials == 0) throw std::invalid_argument("goodness_rate: zero trials");
  const double n = static_cast<double>(sampler.graph().vertex_count());
  const SnakeParams& params = sampler.params();

  unsigned good = 0;
  double consist_sum = 0.0;
  for (unsigned trial = 0; trial < snake_trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    const Snake x = sampler.sample(sampler.graph().base_vertex(), rng);
    const GoodnessReport rep =
        classify_goodness(sampler, x, budget, mc_trials, derive_seed(seed, 0x800000u + trial));
    if (rep.good) ++good;
    consist_sum += rep.consistency.probability;
  }

  GoodnessRateResult res;
  res.trials = snake_trials;
  res.good_fraction = static_cast<double>(good) / snake_trials;
  res.std_err = std::sqrt(res.good_fraction * (1.0 - res.good_fraction) / snake_trials);
  res.mean_consistency = consist_sum / snake_trials;

  const double tail = static_cast<double>(params.length() - params.s);
  const double delta = sampler.chunk_distribution().delta;
  res.disagreement_bound = 2.0 * tail * tail * (delta + 1.0 / n);
  res.endpoint_collision_bound = delta + 1.0 / n;
  res.floors_applicable = delta <= 1.0 / n + 1e-15 && 2.0 * tail * tail / n <= 1e-4 + 1e-15;
  res.consistency_floor = 0.9999 - 2.0 / n;
  res.goodness_floor = 0.999 - 20.0 / n;
  return res;
}

SparseTailResult sparse_tail_experiment(const VertexTransitiveGraph& graph,
                                        const std::vector<double>& cover_prob, unsigned s,
                                        unsigned ell, double eps, unsigned trials,
                                        std::uint64_t seed) {
  if (cover_prob.size() != graph.vertex_count()) {
    throw std::invalid_argument("sparse_tail_experiment: cover table size mismatch");
  }
  if (trials == 0 || ell == 0) {
    throw std::invalid_argument("sparse_tail_experiment: trials and ell must be positive");
  }
  const double n = static_cast<double>(graph.vertex_count());
  SparseTailResult res;
  res.trials = trials;
  res.threshold = 2.0 * ell * eps;
  res.ceiling = std::exp2(-static_cast<double>(ell) * eps);
  res.precondition_ok = static_cast<double>(s) / n <= eps * eps / 6.0 + 1e-15;

  Rng rng(derive_seed(seed, 0));
  unsigned exceed = 0;
  for (unsigned t = 0; t < trials; ++t) {
    double sum = 0.0;
    for (unsigned i = 0; i < ell; ++i) {
      sum += cover_prob[rng.next_below(graph.vertex_count())];
    }
    if (sum > res.threshold) ++exceed;
  }
  res.frequency = static_cast<double>(exceed) / trials;
  res.std_err = std::sqrt(res.frequency * (1.0 - res.frequency) / trials);
  return res;
}

}  // namespace snakelab
