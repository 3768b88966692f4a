#include "snakelab/distribution.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "snakelab/errors.hpp"

namespace snakelab {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(std::string_view text, const char* what) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError(std::string("distribution parse error: bad ") + what + " \"" +
                          std::string(text) + "\"");
  }
  return value;
}

void validate_probabilities(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw std::invalid_argument(std::string(what) + ": empty weight vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0)) {
      throw std::invalid_argument(std::string(what) + ": negative weight at index " +
                                  std::to_string(i));
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > VertexDistribution::kSumTolerance) {
    throw std::invalid_argument(std::string(what) + ": weights sum to " + format_double(sum) +
                                ", expected 1");
  }
}

}  // namespace

VertexDistribution::VertexDistribution(std::vector<double> weights) : w_(std::move(weights)) {
  validate_probabilities(w_, "VertexDistribution");
}

VertexDistribution VertexDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform: empty domain");
  return VertexDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

VertexDistribution VertexDistribution::point_mass(std::size_t n, Vertex v) {
  if (v >= n) throw std::invalid_argument("point_mass: vertex out of range");
  std::vector<double> w(n, 0.0);
  w[v] = 1.0;
  return VertexDistribution(std::move(w));
}

std::vector<Vertex> VertexDistribution::support() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < w_.size(); ++v) {
    if (w_[v] > 0.0) out.push_back(v);
  }
  return out;
}

VertexDistribution VertexDistribution::pushed(const std::vector<Vertex>& map,
                                              std::size_t image_size) const {
  if (map.size() != w_.size()) throw std::invalid_argument("pushed: map size mismatch");
  std::vector<double> out(image_size, 0.0);
  for (Vertex v = 0; v < w_.size(); ++v) {
    if (map[v] >= image_size) throw std::invalid_argument("pushed: image out of range");
    out[map[v]] += w_[v];
  }
  return VertexDistribution(std::move(out));
}

std::string VertexDistribution::serialize_csv() const {
  std::string out = "vertex,weight\n";
  for (Vertex v = 0; v < w_.size(); ++v) {
    out += std::to_string(v);
    out += ',';
    out += format_double(w_[v]);
    out += '\n';
  }
  double sum = 0.0;
  for (double x : w_) sum += x;
  const double delta = tv_distance(*this, uniform(w_.size()));
  out += "# sum=" + format_double(sum) + " delta=" + format_double(delta) + "\n";
  return out;
}

VertexDistribution VertexDistribution::parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    if (nl > pos) lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.size() < 3 || lines[0] != "vertex,weight") {
    throw ValidationError("distribution parse error: missing header or rows");
  }
  if (lines.back().substr(0, 2) != "# ") {
    throw ValidationError("distribution parse error: missing checksum trailer");
  }

  std::vector<double> w;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ValidationError("distribution parse error: bad row \"" + std::string(line) + "\"");
    }
    const double id = parse_double(line.substr(0, comma), "vertex id");
    if (id != static_cast<double>(i - 1)) {
      throw ValidationError("distribution parse error: rows must be dense and ordered; row " +
                            std::to_string(i - 1) + " has id \"" +
                            std::string(line.substr(0, comma)) + "\"");
    }
    w.push_back(parse_double(line.substr(comma + 1), "weight"));
  }

  // Trailer: "# sum=<s> delta=<d>"; both are re-verified against the rows.
  const std::string_view trailer = lines.back();
  const std::size_t sum_pos = trailer.find("sum=");
  const std::size_t delta_pos = trailer.find(" delta=");
  if (sum_pos == std::string_view::npos || delta_pos == std::string_view::npos) {
    throw ValidationError("distribution parse error: bad trailer \"" + std::string(trailer) +
                          "\"");
  }
  const double stated_sum =
      parse_double(trailer.substr(sum_pos + 4, delta_pos - (sum_pos + 4)), "sum");
  const double stated_delta = parse_double(trailer.substr(delta_pos + 7), "delta");

  VertexDistribution dist{std::move(w)};
  double sum = 0.0;
  for (double x : dist.w_) sum += x;
  const double delta = tv_distance(dist, uniform(dist.size()));
  if (std::abs(sum - stated_sum) > kSumTolerance || std::abs(delta - stated_delta) > kSumTolerance) {
    throw ValidationError("distribution parse error: trailer sum/delta do not match rows");
  }
  return dist;
}

double tv_distance(const VertexDistribution& a, const VertexDistribution& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: size mismatch");
  double l1 = 0.0;
  for (Vertex v = 0; v < a.size(); ++v) l1 += std::abs(a[v] - b[v]);
  return 0.5 * l1;
}

bool is_delta_uniform(const VertexDistribution& d, double delta) {
  return tv_distance(d, VertexDistribution::uniform(d.size())) <= delta + 1e-12;
}

VertexDistribution subproduct_distribution(const FiniteGroup& group,
                                           const std::vector<Element>& gens) {
  const std::size_t n = group.order();
  std::vector<double> cur(n, 0.0);
  cur[group.identity()] = 1.0;
  std::vector<double> next(n);
  for (Element g : gens) {
    if (g >= n) throw std::invalid_argument("subproduct_distribution: element id out of range");
    const std::vector<Element> shift = group.right_translation(g);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      if (cur[a] == 0.0) continue;
      const double half = 0.5 * cur[a];
      next[a] += half;
      next[shift[a]] += half;
    }
    cur.swap(next);
  }
  return VertexDistribution(std::move(cur));
}

ChunkMethod parse_chunk_method(std::string_view name) {
  if (name == "uniform_ball") return ChunkMethod::UniformBall;
  if (name == "subproduct") return ChunkMethod::Subproduct;
  if (name == "lazy_walk") return ChunkMethod::LazyWalk;
  if (name == "uniform_all") return ChunkMethod::UniformAll;
  throw std::invalid_argument("unknown chunk method \"" + std::string(name) + "\"");
}

std::string to_string(ChunkMethod m) {
  switch (m) {
    case ChunkMethod::UniformBall: return "uniform_ball";
    case ChunkMethod::Subproduct: return "subproduct";
    case ChunkMethod::LazyWalk: return "lazy_walk";
    case ChunkMethod::UniformAll: return "uniform_all";
  }
  throw std::logic_error("unreachable chunk method");
}

ChunkDistribution build_chunk_distribution(const VertexTransitiveGraph& graph, unsigned s,
                                           ChunkMethod method,
                                           const std::vector<Element>* subproduct_gens) {
  const std::size_t n = graph.vertex_count();
  ChunkDistribution out{VertexDistribution::uniform(n), s, 0.0, method};

  switch (method) {
    case ChunkMethod::UniformBall: {
      const std::vector<Vertex> members = graph.ball(graph.base_vertex(), s);
      std::vector<double> w(n, 0.0);
      for (Vertex v : members) w[v] = 1.0 / static_cast<double>(members.size());
      out.dist = VertexDistribution(std::move(w));
      break;
    }
    case ChunkMethod::Subproduct: {
      if (graph.kind() != VertexTransitiveGraph::Kind::Cayley) {
        throw std::invalid_argument("subproduct chunk distribution requires a Cayley graph");
      }
      if (subproduct_gens == nullptr || subproduct_gens->size() != s) {
        throw std::invalid_argument("subproduct chunk distribution needs exactly s generators");
      }
      for (Element g : *subproduct_gens) {
        if (!graph.is_edge(graph.base_vertex(), g)) {
          throw std::invalid_argument("subproduct generator " + std::to_string(g) +
                                      " is not adjacent to the base vertex");
        }
      }
      out.dist = subproduct_distribution(*graph.group(), *subproduct_gens);
      break;
    }
    case ChunkMethod::LazyWalk: {
      std::vector<double> cur(n, 0.0);
      cur[graph.base_vertex()] = 1.0;
      std::vector<double> next(n);
      const double step = 0.5 / graph.degree();
      for (unsigned t = 0; t < s; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (Vertex v = 0; v < n; ++v) {
          if (cur[v] == 0.0) continue;
          next[v] += 0.5 * cur[v];
          const double share = step * cur[v];
          for (Vertex u : graph.neighbors(v)) next[u] += share;
        }
        cur.swap(next);
      }
      out.dist = VertexDistribution(std::move(cur));
      break;
    }
    case ChunkMethod::UniformAll: {
      if (s != graph.diameter()) {
        throw std::invalid_argument("uniform_all requires s == diameter (" +
                                    std::to_string(graph.diameter()) + "), got s=" +
                                    std::to_string(s));
      }
      out.dist = VertexDistribution::uniform(n);
      break;
    }
  }

  // Invariant of every method: the seed never lands outside the radius-s ball.
  const std::vector<unsigned>& dist0 = graph.base_distances();
  for (Vertex v : out.dist.support()) {
    if (dist0[v] > s) {
      throw std::logic_error("chunk distribution support escapes the radius-" + std::to_string(s) +
                             " ball at vertex " + std::to_string(v));
    }
  }
  out.delta = out.recompute_delta();
  return out;
}

SubproductUniformityResult random_subproduct_experiment(const FiniteGroup& group, unsigned s,
                                                        double delta, unsigned trials,
                                                        std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("random_subproduct_experiment: zero trials");
  SubproductUniformityResult res;
  res.trials = trials;

  unsigned successes = 0;
  std::vector<Element> gens(s);
  for (unsigned t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (unsigned i = 0; i < s; ++i) {
      gens[i] = static_cast<Element>(rng.next_below(group.order()));
    }
    if (is_delta_uniform(subproduct_distribution(group, gens), delta)) ++successes;
  }
  res.fraction = static_cast<double>(successes) / trials;
  res.std_err = std::sqrt(res.fraction * (1.0 - res.fraction) / trials);

  if (delta > 0.0) {
    res.lambda = static_cast<double>(s) - 2.0 * std::log2(static_cast<double>(group.order())) -
                 2.0 * std::log2(1.0 / delta);
    res.vacuous = res.lambda <= 0.0;
  } else {
    res.lambda = -std::numeric_limits<double>::infinity();
    res.vacuous = true;
  }
  res.predicted_floor = res.vacuous ? 0.0 : 1.0 - std::exp2(-res.lambda);
  return res;
}

JointDistribution::JointDistribution(std::vector<std::size_t> shape_in,
                                     std::vector<double> probs_in)
    : shape(std::move(shape_in)), probs(std::move(probs_in)) {
  if (shape.empty()) throw std::invalid_argument("JointDistribution: empty shape");
  std::size_t total = 1;
  for (std::size_t m : shape) {
    if (m == 0) throw std::invalid_argument("JointDistribution: zero-size coordinate");
    if (total > kOutcomeCap / m) {
      throw SizeLimitError("JointDistribution: outcome count exceeds cap " +
                           std::to_string(kOutcomeCap));
    }
    total *= m;
  }
  if (probs.size() != total) {
    throw std::invalid_argument("JointDistribution: expected " + std::to_string(total) +
                                " probabilities, got " + std::to_string(probs.size()));
  }
  validate_probabilities(probs, "JointDistribution");
}

namespace {

constexpr double kMassFloor = 1e-15;

/// tv between two unnormalized slices given their masses.
double conditional_tv(const std::vector<double>& a, double mass_a, const std::vector<double>& b,
                      double mass_b) {
  double l1 = 0.0;
  for (std::size_t o = 0; o < a.size(); ++o) {
    l1 += std::abs(a[o] / mass_a - b[o] / mass_b);
  }
  return 0.5 * l1;
}

/// Maximum conditional tv of coordinate `i` over singleton histories
/// (one concrete outcome for each earlier coordinate).
double singleton_history_max(const JointDistribution& x, const JointDistribution& y,
                             std::size_t i, const std::vector<std::size_t>& stride) {
  const std::size_t hist_count = x.probs.size() / (x.shape[i] * stride[i]);
  const std::size_t m = x.shape[i];
  std::vector<double> cx(hist_count * m, 0.0), cy(hist_count * m, 0.0);
  for (std::size_t flat = 0; flat < x.probs.size(); ++flat) {
    const std::size_t hist = flat / (x.shape[i] * stride[i]);
    const std::size_t o = (flat / stride[i]) % m;
    cx[hist * m + o] += x.probs[flat];
    cy[hist * m + o] += y.probs[flat];
  }
  double best = 0.0;
  std::vector<double> sx(m), sy(m);
  for (std::size_t h = 0; h < hist_count; ++h) {
    double mx = 0.0, my = 0.0;
    for (std::size_t o = 0; o < m; ++o) {
      sx[o] = cx[h * m + o];
      sy[o] = cy[h * m + o];
      mx += sx[o];
      my += sy[o];
    }
    if (mx < kMassFloor || my < kMassFloor) continue;
    best = std::max(best, conditional_tv(sx, mx, sy, my));
  }
  return best;
}

/// Maximum conditional tv of coordinate 1 over all subset histories A of
/// coordinate 0, for one x/y pair of (m0 x m1) marginal tables.
double subset_history_max_1(const std::vector<std::vector<double>>& mx,
                            const std::vector<std::vector<double>>& my, std::size_t m0,
                            std::size_t m1) {
  const std::size_t masks = std::size_t{1} << m0;
  std::vector<std::vector<double>> gx(masks, std::vector<double>(m1, 0.0));
  std::vector<std::vector<double>> gy(masks, std::vector<double>(m1, 0.0));
  double best = 0.0;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    const std::size_t low = mask & (mask - 1);
    const auto bit = static_cast<std::size_t>(std::countr_zero(mask));
    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t o = 0; o < m1; ++o) {
      gx[mask][o] = gx[low][o] + mx[bit][o];
      gy[mask][o] = gy[low][o] + my[bit][o];
      sum_x += gx[mask][o];
      sum_y += gy[mask][o];
    }
    if (sum_x < kMassFloor || sum_y < kMassFloor) continue;
    best = std::max(best, conditional_tv(gx[mask], sum_x, gy[mask], sum_y));
  }
  return best;
}

}  // namespace

TvChainResult tv_chain_bound_check(const JointDistribution& x, const JointDistribution& y) {
  if (x.shape != y.shape) throw std::invalid_argument("tv_chain_bound_check: shape mismatch");
  const std::size_t coords = x.shape.size();

  TvChainResult res;
  double l1 = 0.0;
  for (std::size_t i = 0; i < x.probs.size(); ++i) l1 += std::abs(x.probs[i] - y.probs[i]);
  res.lhs = 0.5 * l1;

  std::vector<std::size_t> stride(coords, 1);
  for (std::size_t i = coords; i-- > 1;) stride[i - 1] = stride[i] * x.shape[i];

  res.exhaustive = coords <= kExhaustiveCoords &&
                   *std::max_element(x.shape.begin(), x.shape.end()) <= kExhaustiveOutcomes;

  // First term: plain tv between the first-coordinate marginals.
  {
    const std::size_t m0 = x.shape[0];
    std::vector<double> ax(m0, 0.0), ay(m0, 0.0);
    for (std::size_t flat = 0; flat < x.probs.size(); ++flat) {
      ax[flat / stride[0]] += x.probs[flat];
      ay[flat / stride[0]] += y.probs[flat];
    }
    double l1m = 0.0;
    for (std::size_t o = 0; o < m0; ++o) l1m += std::abs(ax[o] - ay[o]);
    res.terms.push_back(0.5 * l1m);
  }

  for (std::size_t i = 1; i < coords; ++i) {
    if (!res.exhaustive) {
      res.terms.push_back(singleton_history_max(x, y, i, stride));
      continue;
    }
    if (i == 1) {
      const std::size_t m0 = x.shape[0], m1 = x.shape[1];
      std::vector<std::vector<double>> mx(m0, std::vector<double>(m1, 0.0));
      std::vector<std::vector<double>> my = mx;
      for (std::size_t flat = 0; flat < x.probs.size(); ++flat) {
        const std::size_t a = flat / stride[0];
        const std::size_t o = (flat / stride[1]) % m1;
        mx[a][o] += x.probs[flat];
        my[a][o] += y.probs[flat];
      }
      res.terms.push_back(subset_history_max_1(mx, my, m0, m1));
      continue;
    }

    // i == 2: subset histories over coordinates 0 and 1. Incremental
    // subset sums keep this O(2^m0 * 2^m1 * m2).
    const std::size_t m0 = x.shape[0], m1 = x.shape[1], m2 = x.shape[2];
    const std::size_t masks0 = std::size_t{1} << m0;
    const std::size_t masks1 = std::size_t{1} << m1;
    // tx[a][b][o], flattened.
    std::vector<double> tx(m0 * m1 * m2, 0.0), ty(m0 * m1 * m2, 0.0);
    for (std::size_t flat = 0; flat < x.probs.size(); ++flat) {
      tx[flat] += x.probs[flat];
      ty[flat] += y.probs[flat];
    }
    double best = 0.0;
    std::vector<std::vector<double>> ux(masks0, std::vector<double>(m1 * m2, 0.0));
    std::vector<std::vector<double>> uy(masks0, std::vector<double>(m1 * m2, 0.0));
    std::vector<std::vector<double>> vx(masks1, std::vector<double>(m2, 0.0));
    std::vector<std::vector<double>> vy(masks1, std::vector<double>(m2, 0.0));
    for (std::size_t mask0 = 1; mask0 < masks0; ++mask0) {
      const std::size_t low = mask0 & (mask0 - 1);
      const auto bit = static_cast<std::size_t>(std::countr_zero(mask0));
      for (std::size_t j = 0; j < m1 * m2; ++j) {
        ux[mask0][j] = ux[low][j] + tx[bit * m1 * m2 + j];
        uy[mask0][j] = uy[low][j] + ty[bit * m1 * m2 + j];
      }
      for (std::size_t mask1 = 1; mask1 < masks1; ++mask1) {
        const std::size_t low1 = mask1 & (mask1 - 1);
        const auto bit1 = static_cast<std::size_t>(std::countr_zero(mask1));
        double sum_x = 0.0, sum_y = 0.0;
        for (std::size_t o = 0; o < m2; ++o) {
          vx[mask1][o] = vx[low1][o] + ux[mask0][bit1 * m2 + o];
          vy[mask1][o] = vy[low1][o] + uy[mask0][bit1 * m2 + o];
          sum_x += vx[mask1][o];
          sum_y += vy[mask1][o];
        }
        if (sum_x < kMassFloor || sum_y < kMassFloor) continue;
        best = std::max(best, conditional_tv(vx[mask1], sum_x, vy[mask1], sum_y));
      }
    }
    res.terms.push_back(best);
  }

  res.rhs = 0.0;
  for (double t : res.terms) res.rhs += t;
  res.holds = res.lhs <= res.rhs + 1e-12;
  res.inconclusive = !res.exhaustive && !res.holds;
  return res;
}

}  // namespace snakelab
