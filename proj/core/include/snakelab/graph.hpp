#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "snakelab/group.hpp"

namespace snakelab {

using Vertex = std::uint32_t;

/// One defect found while checking an automorphism family.
struct AutomorphismIssue {
  Vertex x = 0;        ///< index of the offending automorphism
  std::string what;    ///< human-readable description naming the failure
};

struct TransitivityReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<AutomorphismIssue> issues;
};

/// A connected regular graph together with a transitive family of
/// automorphisms sigma_x, one per vertex, satisfying sigma_x(base) = x.
///
/// Two backings:
///  - Cayley: vertices are the elements of a finite group, u ~ u*g for g in
///    a symmetric closed generator set; sigma_x is left translation by x.
///  - Explicit: caller supplies the adjacency lists and the sigma family;
///    everything is validated up front.
///
/// Vertex 0 is the base vertex for Cayley graphs (the identity element).
class VertexTransitiveGraph {
public:
  static constexpr std::size_t kVertexCap = 1u << 20;

  enum class Kind { Cayley, Explicit };

  /// Cayley graph on `group` with generator set `generators` (closed under
  /// inverses automatically; the identity is rejected). Throws
  /// ValidationError when the generators do not generate the group
  /// (disconnected graph) and SizeLimitError above kVertexCap vertices.
  static VertexTransitiveGraph cayley(std::shared_ptr<const FiniteGroup> group,
                                      std::vector<Element> generators);

  /// Graph given by adjacency lists plus an explicit automorphism family
  /// sigma[x][v]. Validates simplicity, symmetry, regularity, connectivity,
  /// and that every sigma_x is an automorphism with sigma_x(base) = x; the
  /// first offender is named in the thrown ValidationError.
  static VertexTransitiveGraph explicit_family(std::vector<std::vector<Vertex>> adjacency,
                                               std::vector<Permutation> sigma,
                                               Vertex base = 0);

  Kind kind() const { return kind_; }
  std::size_t vertex_count() const { return adjacency_.size(); }
  unsigned degree() const { return degree_; }
  Vertex base_vertex() const { return base_; }
  unsigned diameter() const { return diameter_; }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  bool is_edge(Vertex u, Vertex v) const;

  /// Distances from the base vertex, computed once by BFS.
  const std::vector<unsigned>& base_distances() const { return dist0_; }

  /// Fresh BFS from an arbitrary source (no caching; used as an oracle).
  std::vector<unsigned> all_distances(Vertex source) const;

  /// Distance via translation: dist(u,v) = dist(base, sigma_u^{-1}(v)).
  unsigned distance(Vertex u, Vertex v) const;

  /// Distances from x for every vertex, via translation of base distances.
  std::vector<unsigned> distances_from(Vertex x) const;

  /// Vertices within the given radius of `center`, ascending ids.
  std::vector<Vertex> ball(Vertex center, unsigned radius) const;

  /// The canonical shortest path from the base vertex to `target`, excluding
  /// the base vertex itself and padded at the end with `target` up to
  /// `length` entries. Each vertex's shortest-path parent is its smallest-id
  /// neighbor nearer the base, so the result is unique and reproducible.
  /// Requires length >= dist(base, target).
  std::vector<Vertex> extended_shortest_path(Vertex target, unsigned length) const;

  Vertex automorphism_apply(Vertex x, Vertex v) const;
  Vertex automorphism_inverse_apply(Vertex x, Vertex v) const;

  /// Exhaustively checks every sigma_x (permutation, base mapped to x, all
  /// edges preserved). Cost O(N^2 d log d); intended for small graphs.
  TransitivityReport verify_vertex_transitive() const;

  /// Cayley accessors; null/empty for explicit graphs.
  const FiniteGroup* group() const { return group_.get(); }
  const std::vector<Element>& generators() const { return generators_; }

  /// Text round-trip. serialize(parse(serialize(g))) is byte-identical.
  std::string serialize() const;
  static VertexTransitiveGraph parse(std::string_view text);

private:
  VertexTransitiveGraph() = default;

  void finalize();  // degree/connectivity/diameter/base-path bookkeeping

  Kind kind_ = Kind::Cayley;
  Vertex base_ = 0;
  unsigned degree_ = 0;
  unsigned diameter_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<unsigned> dist0_;
  std::vector<Vertex> parent0_;

  std::shared_ptr<const FiniteGroup> group_;
  std::vector<Element> generators_;  // as supplied, sorted and deduplicated

  std::vector<Permutation> sigma_;      // explicit family
  std::vector<Permutation> sigma_inv_;  // inverses, precomputed
};

/// Cycle C_n = Cayley(Z_n, {1}).
VertexTransitiveGraph preset_cycle(unsigned n);

/// Hypercube Q_n = Cayley(Z_2^n, {e_0,...,e_{n-1}}); vertex ids read the
/// coordinates with coordinate 0 as the least-significant bit.
VertexTransitiveGraph preset_hypercube(unsigned n);

/// Torus Z_n^dims = Cayley(Z_n^dims, {e_0,...,e_{dims-1}}).
VertexTransitiveGraph preset_torus(unsigned n, unsigned dims = 2);

/// Cayley graph of `spec` with `count` generators sampled uniformly from the
/// non-identity elements without replacement. Resamples (up to a bounded
/// number of attempts) if the sample fails to generate the group.
VertexTransitiveGraph preset_random_cayley(const GroupSpec& spec, unsigned count,
                                           std::uint64_t seed);

}  // namespace snakelab
