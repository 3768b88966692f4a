#include <vector>

#include "doctest.h"
#include "snakelab/errors.hpp"
#include "snakelab/graph.hpp"

using namespace snakelab;

TEST_CASE("cycle distances and canonical paths") {
  VertexTransitiveGraph c6 = preset_cycle(6);
  CHECK(c6.vertex_count() == 6);
  CHECK(c6.degree() == 2);
  CHECK(c6.diameter() == 3);
  CHECK(c6.base_distances() == std::vector<unsigned>{0, 1, 2, 3, 2, 1});

  // Parent of a vertex is its smallest-id neighbor nearer the base, so the
  // canonical path to 2 goes through 1; padding repeats the target.
  CHECK(c6.extended_shortest_path(2, 2) == std::vector<Vertex>{1, 2});
  CHECK(c6.extended_shortest_path(2, 3) == std::vector<Vertex>{1, 2, 2});
  CHECK(c6.extended_shortest_path(0, 2) == std::vector<Vertex>{0, 0});
  CHECK_THROWS_AS(c6.extended_shortest_path(3, 2), std::invalid_argument);
}

TEST_CASE("hypercube structure") {
  VertexTransitiveGraph q3 = preset_hypercube(3);
  CHECK(q3.vertex_count() == 8);
  CHECK(q3.degree() == 3);
  CHECK(q3.diameter() == 3);
  // Vertex 3 = bits {0,1}; the smallest-id parent chain is 0 -> 1 -> 3.
  CHECK(q3.extended_shortest_path(3, 3) == std::vector<Vertex>{1, 3, 3});
  CHECK(q3.ball(0, 2) == std::vector<Vertex>{0, 1, 2, 3, 4, 5, 6});
  CHECK(q3.ball(0, 0) == std::vector<Vertex>{0});
}

TEST_CASE("torus distances are symmetric and transitive") {
  VertexTransitiveGraph t = preset_torus(4, 2);
  CHECK(t.vertex_count() == 16);
  CHECK(t.degree() == 4);
  CHECK(t.diameter() == 4);
  for (Vertex u = 0; u < t.vertex_count(); ++u) {
    for (Vertex v = 0; v < t.vertex_count(); ++v) {
      CHECK(t.distance(u, v) == t.distance(v, u));
    }
  }
  TransitivityReport report = t.verify_vertex_transitive();
  CHECK(report.ok);
  CHECK(report.issues.empty());
}

TEST_CASE("automorphisms invert cleanly") {
  VertexTransitiveGraph t = preset_torus(4, 2);
  for (Vertex x = 0; x < t.vertex_count(); ++x) {
    CHECK(t.automorphism_apply(x, t.base_vertex()) == x);
    for (Vertex v = 0; v < t.vertex_count(); ++v) {
      CHECK(t.automorphism_inverse_apply(x, t.automorphism_apply(x, v)) == v);
    }
  }
}

TEST_CASE("serialization round-trips byte for byte") {
  for (const VertexTransitiveGraph& g :
       {preset_cycle(6), preset_hypercube(3), preset_torus(3, 2)}) {
    std::string text = g.serialize();
    VertexTransitiveGraph back = VertexTransitiveGraph::parse(text);
    CHECK(back.serialize() == text);
    CHECK(back.vertex_count() == g.vertex_count());
    CHECK(back.diameter() == g.diameter());
  }
  CHECK_THROWS_AS(VertexTransitiveGraph::parse("not a graph"), ValidationError);
}

TEST_CASE("explicit families match the Cayley construction") {
  // C_6 given as a raw adjacency list plus rotations.
  std::vector<std::vector<Vertex>> adjacency(6);
  std::vector<std::vector<Vertex>> sigma(6, std::vector<Vertex>(6));
  for (Vertex v = 0; v < 6; ++v) {
    adjacency[v] = {static_cast<Vertex>((v + 1) % 6), static_cast<Vertex>((v + 5) % 6)};
    for (Vertex u = 0; u < 6; ++u) sigma[v][u] = static_cast<Vertex>((v + u) % 6);
  }
  VertexTransitiveGraph ex = VertexTransitiveGraph::explicit_family(adjacency, sigma, 0);
  VertexTransitiveGraph cayley = preset_cycle(6);
  CHECK(ex.diameter() == cayley.diameter());
  for (Vertex v = 0; v < 6; ++v) {
    CHECK(ex.base_distances()[v] == cayley.base_distances()[v]);
    CHECK(ex.extended_shortest_path(v, 3) == cayley.extended_shortest_path(v, 3));
  }
  CHECK(ex.verify_vertex_transitive().ok);
}

TEST_CASE("broken automorphism families are rejected or flagged") {
  std::vector<std::vector<Vertex>> adjacency(4);
  std::vector<std::vector<Vertex>> sigma(4, std::vector<Vertex>(4));
  for (Vertex v = 0; v < 4; ++v) {
    adjacency[v] = {static_cast<Vertex>((v + 1) % 4), static_cast<Vertex>((v + 3) % 4)};
    for (Vertex u = 0; u < 4; ++u) sigma[v][u] = static_cast<Vertex>((v + u) % 4);
  }
  std::swap(sigma[1][0], sigma[1][1]);  // sigma_1 no longer maps base to 1
  bool constructor_rejected = false;
  bool verify_flagged = false;
  try {
    VertexTransitiveGraph g = VertexTransitiveGraph::explicit_family(adjacency, sigma, 0);
    verify_flagged = !g.verify_vertex_transitive().ok;
  } catch (const ValidationError&) {
    constructor_rejected = true;
  }
  CHECK((constructor_rejected || verify_flagged));
}

TEST_CASE("random Cayley graphs are connected and transitive") {
  GroupSpec spec = GroupSpec::symmetric(4);
  VertexTransitiveGraph g = preset_random_cayley(spec, 3, 1);
  CHECK(g.vertex_count() == 24);
  CHECK(g.verify_vertex_transitive().ok);
  // Same spec and seed must rebuild the same graph.
  CHECK(preset_random_cayley(spec, 3, 1).serialize() == g.serialize());
}
