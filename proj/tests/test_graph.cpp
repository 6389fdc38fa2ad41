#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "pebble/graph.hpp"

namespace pebble {
namespace {

TEST(Graph, PathAndCycleBasics) {
  const Graph p = make_path(5);
  EXPECT_EQ(p.order(), 5u);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.distance(0, 4), 4);
  EXPECT_EQ(p.diameter(), 4);
  EXPECT_EQ(p.max_degree(), 2u);

  const Graph c = make_cycle(6);
  EXPECT_EQ(c.size(), 6u);
  EXPECT_EQ(c.distance(0, 3), 3);
  EXPECT_EQ(c.distance(0, 5), 1);
  EXPECT_TRUE(looks_vertex_transitive(c));
  EXPECT_FALSE(looks_vertex_transitive(p));
}

TEST(Graph, RejectsBadEdges) {
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> twice{{0, 1}, {1, 0}};
  const std::vector<Edge> far{{0, 7}};
  EXPECT_THROW(Graph(3, loop), Error);
  EXPECT_THROW(Graph(3, twice), Error);
  try {
    Graph(3, far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::vertex_out_of_range);
  }
}

TEST(Graph, DisconnectedDistances) {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  const Graph g(4, edges);
  EXPECT_FALSE(g.connected());
  EXPECT_EQ(g.distance(0, 2), kNoPath);
  EXPECT_EQ(g.diameter(), 1);
}

// BFS written out here, compared against the stored all-pairs table.
TEST(Graph, DistancesMatchBfs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_connected_graph(2 + trial % 9, 0.35, rng);
    for (Vertex s = 0; s < g.order(); ++s) {
      std::vector<int> d(g.order(), -1);
      std::vector<Vertex> q{s};
      d[s] = 0;
      for (std::size_t h = 0; h < q.size(); ++h)
        for (Vertex y : g.neighbors(q[h]))
          if (d[y] < 0) {
            d[y] = d[q[h]] + 1;
            q.push_back(y);
          }
      for (Vertex t = 0; t < g.order(); ++t) ASSERT_EQ(g.distance(s, t), d[t]);
    }
  }
}

TEST(Graph, ProductIsSymmetricUpToRelabeling) {
  const Graph a = make_path(3);
  const Graph b = make_cycle(4);
  const Graph ab = cartesian_product(a, b);
  const Graph ba = cartesian_product(b, a);
  ASSERT_EQ(ab.order(), 12u);
  EXPECT_EQ(ab.size(), a.size() * b.order() + b.size() * a.order());
  for (auto [x, y] : ab.edges()) {
    const Vertex i1 = x / 4, j1 = x % 4, i2 = y / 4, j2 = y % 4;
    EXPECT_TRUE(ba.adjacent(product_vertex(a, j1, i1), product_vertex(a, j2, i2)));
  }
  EXPECT_EQ(ab.size(), ba.size());
}

TEST(Graph, ProductDistanceIsSumOfFactorDistances) {
  const Graph t = make_torus(5, 7);
  const Graph c5 = make_cycle(5);
  const Graph c7 = make_cycle(7);
  for (Vertex x = 0; x < t.order(); ++x)
    for (Vertex y = 0; y < t.order(); ++y)
      ASSERT_EQ(t.distance(x, y), c5.distance(x / 7, y / 7) + c7.distance(x % 7, y % 7));
}

TEST(Graph, TorusLayers) {
  const Graph t = make_torus(7, 7);
  EXPECT_EQ(t.max_degree(), 4u);
  const auto layers = t.layer_sizes(0);
  ASSERT_EQ(layers.size(), 7u);
  EXPECT_EQ(layers[0], 1u);
  EXPECT_EQ(layers[1], 4u);
  EXPECT_EQ(layers[2], 8u);
  EXPECT_EQ(layers[3], 12u);
  EXPECT_EQ(layers[4], 12u);
  EXPECT_EQ(layers[5], 8u);
  EXPECT_EQ(layers[6], 4u);
  EXPECT_EQ(t.neighborhood(0, 1).size(), 4u);
  EXPECT_TRUE(looks_vertex_transitive(t));
  EXPECT_FALSE(looks_vertex_transitive(make_grid(5, 5)));
}

TEST(Graph, SpecStrings) {
  auto spec = parse_graph_spec("torus:13,13");
  ASSERT_TRUE(spec);
  EXPECT_EQ(spec->family, Family::torus);
  EXPECT_EQ(build(*spec).order(), 169u);
  EXPECT_EQ(build(*parse_graph_spec("complete:5")).size(), 10u);
  EXPECT_EQ(build(*parse_graph_spec("grid:2,3")).size(), 7u);
  EXPECT_FALSE(parse_graph_spec("some/file.txt"));
  EXPECT_THROW(parse_graph_spec("torus:5"), Error);
  EXPECT_THROW(parse_graph_spec("star:5"), Error);
  EXPECT_THROW(parse_graph_spec("path:x"), Error);
}

TEST(Graph, TextRoundTrip) {
  const Graph g = make_grid(3, 4);
  std::stringstream s;
  write_graph(s, g);
  EXPECT_EQ(read_graph(s), g);

  std::istringstream comments("# a triangle\n3 3\n0 1\n1 2 # last two\n2 0\n");
  EXPECT_EQ(read_graph(comments), make_cycle(3));

  std::istringstream short_input("3 2\n0 1\n");
  EXPECT_THROW(read_graph(short_input), Error);
  std::istringstream junk("2 1\n0 one\n");
  EXPECT_THROW(read_graph(junk), Error);
}

TEST(Graph, KnownAutomorphismsAreAutomorphisms) {
  for (const char* text : {"path:6", "cycle:7", "grid:3,3", "grid:3,5", "torus:5,5", "torus:5,6", "complete:5"}) {
    const auto spec = *parse_graph_spec(text);
    const Graph g = build(spec);
    const auto group = known_automorphisms(spec, g.order());
    EXPECT_FALSE(group.empty()) << text;
    for (const auto& perm : group) EXPECT_TRUE(is_automorphism(g, perm)) << text;
  }
  EXPECT_EQ(known_automorphisms(*parse_graph_spec("cycle:7"), 7).size(), 14u);
  EXPECT_EQ(known_automorphisms(*parse_graph_spec("torus:5,5"), 25).size(), 200u);
  EXPECT_FALSE(is_automorphism(make_path(3), Permutation{1, 0, 2}));
}

// Connected graphs on n unlabeled vertices: 1, 1, 2, 6, 21, 112.
TEST(Graph, ConnectedGraphCounts) {
  const std::vector<std::size_t> expected{1, 1, 2, 6, 21, 112};
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto graphs = enumerate_connected_graphs(n);
    EXPECT_EQ(graphs.size(), expected[n - 1]) << n;
    for (const auto& g : graphs) EXPECT_TRUE(g.connected());
  }
}

// Pairwise non-isomorphic: compare canonical forms by brute force over all
// permutations.
TEST(Graph, EnumeratedGraphsAreDistinct) {
  const std::size_t n = 5;
  auto canon = [&](const Graph& g) {
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::set<std::pair<Vertex, Vertex>> best;
    bool first = true;
    do {
      std::set<std::pair<Vertex, Vertex>> image;
      for (auto [a, b] : g.edges()) image.emplace(std::min(perm[a], perm[b]), std::max(perm[a], perm[b]));
      if (first || image < best) best = image;
      first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  };
  std::set<std::set<std::pair<Vertex, Vertex>>> seen;
  for (const auto& g : enumerate_connected_graphs(n)) seen.insert(canon(g));
  EXPECT_EQ(seen.size(), 21u);
}

}  // namespace
}  // namespace pebble
