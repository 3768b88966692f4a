#include "snakelab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "snakelab/errors.hpp"
#include "snakelab/rng.hpp"

namespace snakelab {

namespace {

constexpr unsigned kUnreached = std::numeric_limits<unsigned>::max();

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError(std::string("graph parse error: bad ") + what + " \"" +
                          std::string(text) + "\"");
  }
  return value;
}

/// "key=value" field extraction from a header token.
std::string_view field_value(std::string_view token, std::string_view key) {
  if (token.size() < key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    throw ValidationError("graph parse error: expected \"" + std::string(key) +
                          "=...\", got \"" + std::string(token) + "\"");
  }
  return token.substr(key.size() + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

/// Parses "<v>: n1 n2 ..." and checks the leading index is `expect`.
std::vector<Vertex> parse_adjacency_line(std::string_view line, Vertex expect, std::size_t n) {
  auto tokens = split_ws(line);
  if (tokens.empty() || tokens[0].size() < 2 || tokens[0].back() != ':') {
    throw ValidationError("graph parse error: bad adjacency line \"" + std::string(line) + "\"");
  }
  std::uint64_t v = parse_u64(tokens[0].substr(0, tokens[0].size() - 1), "vertex id");
  if (v != expect) {
    throw ValidationError("graph parse error: adjacency lines out of order (expected vertex " +
                          std::to_string(expect) + ", got " + std::to_string(v) + ")");
  }
  std::vector<Vertex> neighbors;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    std::uint64_t w = parse_u64(tokens[i], "neighbor id");
    if (w >= n) {
      throw ValidationError("graph parse error: neighbor " + std::to_string(w) +
                            " out of range for N=" + std::to_string(n));
    }
    neighbors.push_back(static_cast<Vertex>(w));
  }
  return neighbors;
}

}  // namespace

VertexTransitiveGraph VertexTransitiveGraph::cayley(std::shared_ptr<const FiniteGroup> group,
                                                    std::vector<Element> generators) {
  if (!group) throw std::invalid_argument("cayley: null group");
  if (generators.empty()) throw ValidationError("cayley: empty generator set");
  const std::uint64_t order = group->order();
  if (order > kVertexCap) {
    throw SizeLimitError("cayley: group order " + std::to_string(order) + " exceeds vertex cap " +
                         std::to_string(kVertexCap));
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (Element g : generators) {
    if (g >= order) {
      throw ValidationError("cayley: generator id " + std::to_string(g) + " out of range");
    }
    if (g == group->identity()) {
      throw ValidationError("cayley: identity element is not a valid generator");
    }
  }

  // Close the generator set under inverses so the graph is undirected.
  std::vector<Element> closed = generators;
  for (Element g : generators) closed.push_back(group->invert(g));
  std::sort(closed.begin(), closed.end());
  closed.erase(std::unique(closed.begin(), closed.end()), closed.end());

  VertexTransitiveGraph graph;
  graph.kind_ = Kind::Cayley;
  graph.base_ = 0;
  graph.adjacency_.assign(order, {});
  for (auto& row : graph.adjacency_) row.reserve(closed.size());
  for (Element g : closed) {
    std::vector<Element> column = group->right_translation(g);
    for (std::uint64_t a = 0; a < order; ++a) {
      graph.adjacency_[a].push_back(column[a]);
    }
  }
  for (auto& row : graph.adjacency_) std::sort(row.begin(), row.end());
  graph.group_ = std::move(group);
  graph.generators_ = std::move(generators);
  graph.finalize();
  return graph;
}

VertexTransitiveGraph VertexTransitiveGraph::explicit_family(
    std::vector<std::vector<Vertex>> adjacency, std::vector<Permutation> sigma, Vertex base) {
  const std::size_t n = adjacency.size();
  if (n < 2) throw ValidationError("explicit graph needs at least 2 vertices");
  if (n > kVertexCap) {
    throw SizeLimitError("explicit graph has " + std::to_string(n) + " vertices, cap is " +
                         std::to_string(kVertexCap));
  }
  if (base >= n) throw ValidationError("explicit graph: base vertex out of range");

  for (Vertex v = 0; v < n; ++v) {
    auto& row = adjacency[v];
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= n) {
        throw ValidationError("vertex " + std::to_string(v) + " lists neighbor " +
                              std::to_string(row[i]) + " out of range");
      }
      if (row[i] == v) {
        throw ValidationError("vertex " + std::to_string(v) + " has a self-loop");
      }
      if (i > 0 && row[i] == row[i - 1]) {
        throw ValidationError("vertex " + std::to_string(v) + " lists neighbor " +
                              std::to_string(row[i]) + " twice");
      }
    }
  }
  const std::size_t degree = adjacency[0].size();
  if (degree == 0) throw ValidationError("explicit graph: vertex 0 has no neighbors");
  for (Vertex v = 0; v < n; ++v) {
    if (adjacency[v].size() != degree) {
      throw ValidationError("graph is not regular: vertex " + std::to_string(v) + " has degree " +
                            std::to_string(adjacency[v].size()) + ", vertex 0 has degree " +
                            std::to_string(degree));
    }
    for (Vertex w : adjacency[v]) {
      if (!std::binary_search(adjacency[w].begin(), adjacency[w].end(), v)) {
        throw ValidationError("edge (" + std::to_string(v) + "," + std::to_string(w) +
                              ") is not symmetric");
      }
    }
  }

  if (sigma.size() != n) {
    throw ValidationError("automorphism family has " + std::to_string(sigma.size()) +
                          " entries, expected one per vertex (" + std::to_string(n) + ")");
  }

  VertexTransitiveGraph graph;
  graph.kind_ = Kind::Explicit;
  graph.base_ = base;
  graph.adjacency_ = std::move(adjacency);
  graph.sigma_ = std::move(sigma);
  graph.sigma_inv_.reserve(n);
  for (Vertex x = 0; x < n; ++x) {
    const Permutation& p = graph.sigma_[x];
    if (p.size() != n) {
      throw ValidationError("sigma_" + std::to_string(x) + " has " + std::to_string(p.size()) +
                            " entries, expected " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (Vertex v = 0; v < n; ++v) {
      if (p[v] >= n || seen[p[v]]) {
        throw ValidationError("sigma_" + std::to_string(x) + " is not a permutation (at input " +
                              std::to_string(v) + ")");
      }
      seen[p[v]] = true;
    }
    graph.sigma_inv_.push_back(invert_permutation(p));
  }
  graph.finalize();

  TransitivityReport report = graph.verify_vertex_transitive();
  if (!report.ok) {
    const AutomorphismIssue& first = report.issues.front();
    throw ValidationError("automorphism family rejected: sigma_" + std::to_string(first.x) +
                          ": " + first.what);
  }
  return graph;
}

void VertexTransitiveGraph::finalize() {
  degree_ = static_cast<unsigned>(adjacency_[base_].size());
  dist0_ = all_distances(base_);
  std::size_t unreachable = 0;
  for (unsigned d : dist0_) {
    if (d == kUnreached) ++unreachable;
  }
  if (unreachable > 0) {
    throw ValidationError("graph is disconnected: " + std::to_string(unreachable) + " of " +
                          std::to_string(vertex_count()) +
                          " vertices unreachable from the base vertex (for Cayley graphs this "
                          "means the generators do not generate the group)");
  }
  diameter_ = *std::max_element(dist0_.begin(), dist0_.end());

  // Canonical shortest-path tree: parent = smallest-id neighbor nearer base.
  parent0_.assign(vertex_count(), base_);
  for (Vertex v = 0; v < vertex_count(); ++v) {
    if (v == base_) continue;
    for (Vertex w : adjacency_[v]) {
      if (dist0_[w] + 1 == dist0_[v]) {
        parent0_[v] = w;
        break;  // adjacency is sorted, first hit is the smallest id
      }
    }
  }
}

bool VertexTransitiveGraph::is_edge(Vertex u, Vertex v) const {
  const auto& row = adjacency_[u];
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<unsigned> VertexTransitiveGraph::all_distances(Vertex source) const {
  std::vector<unsigned> dist(vertex_count(), kUnreached);
  std::vector<Vertex> queue;
  queue.reserve(vertex_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (Vertex w : adjacency_[u]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

unsigned VertexTransitiveGraph::distance(Vertex u, Vertex v) const {
  return dist0_[automorphism_inverse_apply(u, v)];
}

std::vector<unsigned> VertexTransitiveGraph::distances_from(Vertex x) const {
  std::vector<unsigned> out(vertex_count());
  if (kind_ == Kind::Cayley) {
    const Element inv = group_->invert(x);
    for (Vertex v = 0; v < vertex_count(); ++v) out[v] = dist0_[group_->multiply(inv, v)];
  } else {
    const Permutation& inv = sigma_inv_[x];
    for (Vertex v = 0; v < vertex_count(); ++v) out[v] = dist0_[inv[v]];
  }
  return out;
}

std::vector<Vertex> VertexTransitiveGraph::ball(Vertex center, unsigned radius) const {
  std::vector<unsigned> dist = distances_from(center);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v) {
    if (dist[v] <= radius) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> VertexTransitiveGraph::extended_shortest_path(Vertex target,
                                                                  unsigned length) const {
  if (target >= vertex_count()) {
    throw std::invalid_argument("extended_shortest_path: target out of range");
  }
  const unsigned r = dist0_[target];
  if (length < r) {
    throw std::invalid_argument("extended_shortest_path: length " + std::to_string(length) +
                                " shorter than distance " + std::to_string(r));
  }
  std::vector<Vertex> path(length, target);
  Vertex v = target;
  for (unsigned i = r; i > 0; --i) {
    path[i - 1] = v;
    v = parent0_[v];
  }
  return path;
}

Vertex VertexTransitiveGraph::automorphism_apply(Vertex x, Vertex v) const {
  if (kind_ == Kind::Cayley) return group_->multiply(x, v);
  return sigma_[x][v];
}

Vertex VertexTransitiveGraph::automorphism_inverse_apply(Vertex x, Vertex v) const {
  if (kind_ == Kind::Cayley) return group_->multiply(group_->invert(x), v);
  return sigma_inv_[x][v];
}

TransitivityReport VertexTransitiveGraph::verify_vertex_transitive() const {
  TransitivityReport report;
  const std::size_t n = vertex_count();
  constexpr std::size_t kIssueCap = 100;
  auto add_issue = [&](Vertex x, std::string what) {
    report.ok = false;
    if (report.issues.size() < kIssueCap) report.issues.push_back({x, std::move(what)});
  };

  std::vector<bool> seen(n);
  for (Vertex x = 0; x < n; ++x) {
    ++report.checked;
    std::fill(seen.begin(), seen.end(), false);
    bool bijective = true;
    for (Vertex v = 0; v < n; ++v) {
      const Vertex image = automorphism_apply(x, v);
      if (image >= n || seen[image]) {
        add_issue(x, "not a permutation (input " + std::to_string(v) + ")");
        bijective = false;
        break;
      }
      seen[image] = true;
    }
    if (!bijective) continue;
    if (automorphism_apply(x, base_) != x) {
      add_issue(x, "does not map the base vertex to " + std::to_string(x));
      continue;
    }
    bool edges_ok = true;
    for (Vertex v = 0; v < n && edges_ok; ++v) {
      for (Vertex w : adjacency_[v]) {
        if (w < v) continue;  // each undirected edge once
        if (!is_edge(automorphism_apply(x, v), automorphism_apply(x, w))) {
          add_issue(x, "breaks edge (" + std::to_string(v) + "," + std::to_string(w) + ")");
          edges_ok = false;
          break;
        }
      }
    }
  }
  return report;
}

std::string VertexTransitiveGraph::serialize() const {
  std::string out = "vt-graph v1 N=" + std::to_string(vertex_count()) +
                    " d=" + std::to_string(diameter_) + " base=" + std::to_string(base_) + "\n";
  if (kind_ == Kind::Cayley) {
    out += "cayley group=" + group_->spec().to_string() + " gens=";
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(generators_[i]);
    }
    out += '\n';
  } else {
    out += "explicit\n";
  }
  for (Vertex v = 0; v < vertex_count(); ++v) {
    out += std::to_string(v);
    out += ':';
    for (Vertex w : adjacency_[v]) {
      out += ' ';
      out += std::to_string(w);
    }
    out += '\n';
  }
  if (kind_ == Kind::Explicit) {
    for (Vertex x = 0; x < vertex_count(); ++x) {
      out += "sigma " + std::to_string(x) + ":";
      for (Vertex v : sigma_[x]) {
        out += ' ';
        out += std::to_string(v);
      }
      out += '\n';
    }
  }
  return out;
}

VertexTransitiveGraph VertexTransitiveGraph::parse(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 2) throw ValidationError("graph parse error: truncated input");

  auto header = split_ws(lines[0]);
  if (header.size() != 5 || header[0] != "vt-graph" || header[1] != "v1") {
    throw ValidationError("graph parse error: bad header \"" + std::string(lines[0]) + "\"");
  }
  const std::uint64_t n = parse_u64(field_value(header[2], "N"), "vertex count");
  const std::uint64_t d = parse_u64(field_value(header[3], "d"), "diameter");
  const std::uint64_t base = parse_u64(field_value(header[4], "base"), "base vertex");
  if (n < 2 || n > kVertexCap) {
    throw ValidationError("graph parse error: vertex count " + std::to_string(n) +
                          " out of range");
  }

  const std::string_view kind_line = lines[1];
  VertexTransitiveGraph graph;
  std::size_t next_line = 2;

  if (kind_line.substr(0, 7) == "cayley ") {
    const std::size_t group_pos = kind_line.find("group=");
    const std::size_t gens_pos = kind_line.rfind(" gens=");
    if (group_pos == std::string_view::npos || gens_pos == std::string_view::npos ||
        gens_pos <= group_pos) {
      throw ValidationError("graph parse error: bad cayley line \"" + std::string(kind_line) +
                            "\"");
    }
    GroupSpec spec = GroupSpec::parse(kind_line.substr(group_pos + 6, gens_pos - group_pos - 6));
    std::vector<Element> gens;
    std::string_view gens_text = kind_line.substr(gens_pos + 6);
    std::size_t pos = 0;
    while (pos < gens_text.size()) {
      std::size_t comma = gens_text.find(',', pos);
      if (comma == std::string_view::npos) comma = gens_text.size();
      gens.push_back(
          static_cast<Element>(parse_u64(gens_text.substr(pos, comma - pos), "generator id")));
      pos = comma + 1;
    }
    graph = cayley(FiniteGroup::build(spec), std::move(gens));
    if (graph.vertex_count() != n) {
      throw ValidationError("graph parse error: header says N=" + std::to_string(n) +
                            " but the group has order " + std::to_string(graph.vertex_count()));
    }
    if (lines.size() < next_line + n) {
      throw ValidationError("graph parse error: missing adjacency lines");
    }
    for (Vertex v = 0; v < n; ++v) {
      auto neighbors = parse_adjacency_line(lines[next_line + v], v, n);
      if (neighbors != graph.adjacency_[v]) {
        throw ValidationError("graph parse error: adjacency of vertex " + std::to_string(v) +
                              " does not match the declared Cayley structure");
      }
    }
    next_line += n;
  } else if (kind_line == "explicit") {
    if (lines.size() < next_line + 2 * n) {
      throw ValidationError("graph parse error: missing adjacency or sigma lines");
    }
    std::vector<std::vector<Vertex>> adjacency;
    adjacency.reserve(n);
    for (Vertex v = 0; v < n; ++v) {
      adjacency.push_back(parse_adjacency_line(lines[next_line + v], v, n));
    }
    next_line += n;
    std::vector<Permutation> sigma;
    sigma.reserve(n);
    for (Vertex x = 0; x < n; ++x) {
      auto tokens = split_ws(lines[next_line + x]);
      if (tokens.size() != n + 2 || tokens[0] != "sigma" ||
          tokens[1] != std::to_string(x) + ":") {
        throw ValidationError("graph parse error: bad sigma line for automorphism " +
                              std::to_string(x));
      }
      Permutation p;
      p.reserve(n);
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        p.push_back(static_cast<Vertex>(parse_u64(tokens[i], "sigma image")));
      }
      sigma.push_back(std::move(p));
    }
    next_line += n;
    graph = explicit_family(std::move(adjacency), std::move(sigma), static_cast<Vertex>(base));
  } else {
    throw ValidationError("graph parse error: unknown kind line \"" + std::string(kind_line) +
                          "\"");
  }

  for (std::size_t i = next_line; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      throw ValidationError("graph parse error: trailing content \"" + std::string(lines[i]) +
                            "\"");
    }
  }
  if (graph.base_ != base) {
    throw ValidationError("graph parse error: header base " + std::to_string(base) +
                          " does not match reconstructed base " + std::to_string(graph.base_));
  }
  if (graph.diameter_ != d) {
    throw ValidationError("graph parse error: header diameter " + std::to_string(d) +
                          " does not match computed diameter " + std::to_string(graph.diameter_));
  }
  return graph;
}

VertexTransitiveGraph preset_cycle(unsigned n) {
  auto group = FiniteGroup::build(GroupSpec::cyclic(n));
  return VertexTransitiveGraph::cayley(std::move(group), {1});
}

VertexTransitiveGraph preset_hypercube(unsigned n) {
  auto group = FiniteGroup::build(GroupSpec::power(GroupSpec::cyclic(2), n));
  std::vector<Element> gens;
  for (unsigned i = 0; i < n; ++i) gens.push_back(static_cast<Element>(1u << i));
  return VertexTransitiveGraph::cayley(std::move(group), std::move(gens));
}

VertexTransitiveGraph preset_torus(unsigned n, unsigned dims) {
  auto group = FiniteGroup::build(GroupSpec::power(GroupSpec::cyclic(n), dims));
  std::vector<Element> gens;
  std::uint64_t unit = 1;
  for (unsigned i = 0; i < dims; ++i) {
    gens.push_back(static_cast<Element>(unit));
    unit *= n;
  }
  return VertexTransitiveGraph::cayley(std::move(group), std::move(gens));
}

VertexTransitiveGraph preset_random_cayley(const GroupSpec& spec, unsigned count,
                                           std::uint64_t seed) {
  auto group = FiniteGroup::build(spec);
  if (group->order() < 2) throw ValidationError("random cayley: group is trivial");
  if (count == 0 || count >= group->order()) {
    throw std::invalid_argument("random cayley: generator count " + std::to_string(count) +
                                " out of range for order " + std::to_string(group->order()));
  }
  constexpr unsigned kAttempts = 64;
  for (unsigned attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<Element> gens;
    while (gens.size() < count) {
      const auto g = static_cast<Element>(1 + rng.next_below(group->order() - 1));
      if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
    try {
      return VertexTransitiveGraph::cayley(group, std::move(gens));
    } catch (const ValidationError&) {
      // Disconnected sample; try the next derived stream.
    }
  }
  throw ValidationError("random cayley: no generating set found in " +
                        std::to_string(kAttempts) + " attempts for " + spec.to_string());
}

}  // namespace snakelab
