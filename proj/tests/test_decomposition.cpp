#include <gtest/gtest.h>

#include <bit>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "pebble/decomposition.hpp"

namespace pebble {
namespace {

using Counts = std::vector<Count>;

// Every distribution reachable from `start`, for oracle use.
std::set<Counts> closure(const Graph& g, const Counts& start) {
  std::set<Counts> seen{start};
  std::vector<Counts> queue{start};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const Counts s = queue[h];
    for (Vertex a = 0; a < g.order(); ++a) {
      if (s[a] < 2) continue;
      for (Vertex b : g.neighbors(a)) {
        Counts t = s;
        t[a] -= 2;
        t[b] += 1;
        if (seen.insert(t).second) queue.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<Count> oracle_reach(const Graph& g, const Counts& start) {
  std::vector<Count> best(g.order(), 0);
  for (const auto& s : closure(g, start))
    for (Vertex v = 0; v < g.order(); ++v) best[v] = std::max(best[v], s[v]);
  return best;
}

// M(v) by search over (distribution, utilized cooperation vertices) pairs.
// A move utilizes both of its endpoints.
std::vector<MValue> oracle_m(const Graph& g, const Counts& start, const std::vector<Vertex>& coop) {
  std::vector<int> bit(g.order(), -1);
  for (std::size_t i = 0; i < coop.size(); ++i) bit[coop[i]] = static_cast<int>(i);
  std::set<std::pair<Counts, std::uint32_t>> seen{{start, 0}};
  std::vector<std::pair<Counts, std::uint32_t>> queue{{start, 0}};
  std::vector<MValue> m(g.order(), MValue::infinite());
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto [s, used] = queue[h];
    for (Vertex v = 0; v < g.order(); ++v) {
      if (s[v] >= 2) m[v] = std::min(m[v], MValue(static_cast<std::uint32_t>(std::popcount(used))));
    }
    for (Vertex a = 0; a < g.order(); ++a) {
      if (s[a] < 2) continue;
      for (Vertex b : g.neighbors(a)) {
        Counts t = s;
        t[a] -= 2;
        t[b] += 1;
        std::uint32_t u = used;
        if (bit[a] >= 0) u |= 1u << bit[a];
        if (bit[b] >= 0) u |= 1u << bit[b];
        if (seen.insert({t, u}).second) queue.push_back({t, u});
      }
    }
  }
  return m;
}

// Maximal vertex sets, pairwise joined by a path whose inner vertices all
// have positive cooperation excess, that contain such a vertex.
std::set<std::vector<Vertex>> oracle_c_blocks(const Graph& g, const std::vector<std::int64_t>& ce) {
  const std::size_t n = g.order();
  std::vector<std::vector<bool>> joined(n, std::vector<bool>(n, false));
  for (Vertex a = 0; a < n; ++a) {
    // walk from a through positive vertices
    std::vector<bool> seen(n, false);
    std::vector<Vertex> stack;
    for (Vertex y : g.neighbors(a)) {
      joined[a][y] = true;
      if (ce[y] > 0 && !seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : g.neighbors(x)) {
        if (y != a) joined[a][y] = true;
        if (ce[y] > 0 && !seen[y] && y != a) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
  }
  std::vector<std::uint32_t> good;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool has_ce = false, ok = true;
    for (Vertex a = 0; a < n && ok; ++a) {
      if (!(mask >> a & 1)) continue;
      if (ce[a] > 0) has_ce = true;
      for (Vertex b = a + 1; b < n; ++b)
        if ((mask >> b & 1) && !joined[a][b]) ok = false;
    }
    if (ok && has_ce) good.push_back(mask);
  }
  std::set<std::vector<Vertex>> out;
  for (auto mask : good) {
    bool maximal = true;
    for (auto other : good)
      if (other != mask && (other & mask) == mask) maximal = false;
    if (!maximal) continue;
    std::vector<Vertex> members;
    for (Vertex a = 0; a < n; ++a)
      if (mask >> a & 1) members.push_back(a);
    out.insert(members);
  }
  return out;
}

TEST(Decomposition, DecomposeOrdersBySizeThenVertex) {
  const Graph g = make_path(5);
  EXPECT_EQ(decompose(PebbleDistribution(g, {{0, 2}, {3, 1}})),
            (std::vector<UnitDistribution>{{3, 1}, {0, 2}}));
  EXPECT_TRUE(decompose(PebbleDistribution(g)).empty());
  EXPECT_EQ(decompose(PebbleDistribution(g, {{4, 2}, {1, 2}})),
            (std::vector<UnitDistribution>{{1, 2}, {4, 2}}));
}

TEST(Decomposition, Sum) {
  const Graph g = make_path(3);
  const PebbleDistribution a(g, {{0, 1}});
  EXPECT_EQ(sum(a, PebbleDistribution(g, {{2, 2}})), PebbleDistribution(g, {{0, 1}, {2, 2}}));
  EXPECT_EQ(sum(a, PebbleDistribution(g)), a);
  EXPECT_EQ(sum(a, a), PebbleDistribution(g, {{0, 2}}));
  try {
    sum(a, PebbleDistribution(make_cycle(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::graph_mismatch);
  }
}

TEST(Decomposition, CooperationExamples) {
  const Graph p4 = make_path(4);
  const auto r = cooperation(PebbleDistribution(p4, {{1, 1}}), PebbleDistribution(p4, {{2, 2}}));
  EXPECT_EQ(r.coop, 1u);
  EXPECT_EQ(r.coop_vertices, std::vector<Vertex>{0});
  EXPECT_EQ(r.dc, 1u);
  EXPECT_EQ(r.dc_vertices, std::vector<Vertex>{1});
  EXPECT_EQ(r.ce, 1);

  const Graph p3 = make_path(3);
  const auto none = cooperation(PebbleDistribution(p3, {{0, 1}}), PebbleDistribution(p3, {{2, 2}}));
  EXPECT_EQ(none.coop, 0u);
  EXPECT_EQ(none.dc, 0u);
  EXPECT_EQ(none.ce, 0);

  const auto empty = cooperation(PebbleDistribution(p4, {{0, 3}}), PebbleDistribution(p4));
  EXPECT_EQ(empty.coop, 0u);
  EXPECT_EQ(empty.dc, 0u);
  EXPECT_EQ(empty.ce, 0);

  try {
    cooperation(PebbleDistribution(p4, {{1, 1}}), PebbleDistribution(p4, {{1, 2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_disjoint);
  }
}

TEST(Decomposition, MValueExamples) {
  const Graph p4 = make_path(4);
  const PebbleDistribution p(p4, {{1, 1}});
  EXPECT_EQ(m_value(p, {2, 2}, 1), MValue(0));
  EXPECT_TRUE(m_value(p, {2, 2}, 0).is_infinite());
  EXPECT_EQ(m_value(p, {2, 2}, 2), MValue(0));
  EXPECT_EQ(m_value(PebbleDistribution(p4, {{0, 1}}), {3, 0}, 1), MValue::infinite());
  EXPECT_EQ(MValue::infinite().str(), "inf");
  EXPECT_LT(MValue(1000), MValue::infinite());
}

// Cooperation identities and M values against independent enumeration.
TEST(Decomposition, CooperationMatchesOracle) {
  std::mt19937_64 rng(17);
  std::size_t with_coop = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = random_connected_graph(3 + trial % 5, 0.4, rng);
    const std::size_t n = g.order();
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    const Vertex u = pick(rng);
    const Count size = 2 + trial % 3;
    PebbleDistribution p(g);
    for (int i = 0; i < 3; ++i) {
      const Vertex v = pick(rng);
      if (v != u) p.add(v, 1);
    }
    Counts pc(p.counts().begin(), p.counts().end());
    Counts uc(n, 0);
    uc[u] = size;
    Counts sc = pc;
    sc[u] += size;
    const auto rp = oracle_reach(g, pc);
    const auto ru = oracle_reach(g, uc);
    const auto rs = oracle_reach(g, sc);

    const auto r = cooperation(p, UnitDistribution{u, size});
    std::vector<Vertex> coop, dc;
    std::int64_t ce = 0;
    auto exc = [](Count x) { return x ? static_cast<std::int64_t>(x) - 1 : 0; };
    for (Vertex v = 0; v < n; ++v) {
      if (!rp[v] && !ru[v] && rs[v]) coop.push_back(v);
      if (rp[v] && ru[v]) dc.push_back(v);
      const auto pv = exc(rs[v]) - exc(rp[v]) - exc(ru[v]);
      EXPECT_EQ(r.per_vertex_ce[v], pv);
      EXPECT_GE(pv, 0);
      ce += pv;
    }
    ASSERT_EQ(r.coop_vertices, coop);
    ASSERT_EQ(r.dc_vertices, dc);
    ASSERT_EQ(r.ce, ce);
    if (!coop.empty()) ++with_coop;

    // coverage identity
    std::int64_t cov_p = 0, cov_u = 0, cov_s = 0;
    for (Vertex v = 0; v < n; ++v) {
      cov_p += rp[v] > 0;
      cov_u += ru[v] > 0;
      cov_s += rs[v] > 0;
    }
    EXPECT_EQ(cov_s, cov_p + cov_u + static_cast<std::int64_t>(coop.size()) - static_cast<std::int64_t>(dc.size()));

    ASSERT_EQ(r.m_values, oracle_m(g, sc, coop)) << to_string(p) << " u=" << u << ":" << size;
  }
  EXPECT_GT(with_coop, 20u);
}

TEST(Decomposition, UnitExcess) {
  const Graph p5 = make_path(5);
  EXPECT_EQ(unit_excess(PebbleDistribution(p5, {{2, 4}})), 5u);
  EXPECT_EQ(unit_excess(PebbleDistribution(p5, {{0, 1}, {2, 1}, {4, 1}})), 0u);
  EXPECT_EQ(unit_excess(PebbleDistribution(make_cycle(3), {{0, 2}})), 1u);
}

// A unit of s at u has excess sum_v max(floor(s / 2^d) - 1, 0).
TEST(Decomposition, UnitExcessClosedForm) {
  const Graph g = make_torus(5, 6);
  for (Count s = 1; s <= 12; ++s) {
    std::int64_t expected = 0;
    for (Vertex v = 0; v < g.order(); ++v) {
      const Count r = s >> g.distance(3, v);
      if (r > 1) expected += r - 1;
    }
    EXPECT_EQ(static_cast<std::int64_t>(unit_excess(PebbleDistribution(g, {{3, s}}))), expected) << s;
  }
}

TEST(Decomposition, IdentitiesOnExamples) {
  const Graph p5 = make_path(5);
  EXPECT_TRUE(decomposition_identities(PebbleDistribution(p5, {{1, 2}, {3, 2}})).ok());
  const auto single = decomposition_identities(PebbleDistribution(p5, {{2, 3}}));
  EXPECT_TRUE(single.ok());
  const Graph p4 = make_path(4);
  const auto c = decomposition_identities(PebbleDistribution(p4, {{1, 1}, {2, 2}}));
  EXPECT_EQ(c.cov_lhs, 4);
  EXPECT_EQ(c.cov_rhs, 4);
  EXPECT_TRUE(c.te_balanced());
}

TEST(Decomposition, IdentitiesHoldOnRandomDistributions) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = random_connected_graph(3 + trial % 6, 0.35, rng);
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g.order() - 1));
    PebbleDistribution p(g);
    for (int i = 0; i < 8; ++i) p.add(pick(rng), 1);
    const auto check = decomposition_identities(p);
    EXPECT_TRUE(check.ok()) << to_string(p);
  }
}

TEST(Decomposition, CBlockExamples) {
  const Graph p4 = make_path(4);
  const auto blocks = find_c_blocks(PebbleDistribution(p4, {{1, 1}}), {2, 2});
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0], (std::vector<Vertex>{0, 1, 2}));

  EXPECT_TRUE(find_c_blocks(PebbleDistribution(make_path(3), {{0, 1}}), {2, 2}).empty());
  EXPECT_THROW(find_c_blocks(PebbleDistribution(p4, {{1, 1}}), {2, 1}), Error);
}

// A central unit meeting single pebbles on both sides of a path: two blocks
// with disjoint interiors, {1,2,3} and {5,6,7}.
TEST(Decomposition, TwoSeparateBlocks) {
  const Graph g = make_path(9);
  const PebbleDistribution p(g, {{2, 1}, {6, 1}});
  const auto report = cooperation(p, UnitDistribution{4, 4});
  const auto blocks = c_blocks(g, report);
  const auto expected = oracle_c_blocks(g, report.per_vertex_ce);
  EXPECT_EQ(std::set<std::vector<Vertex>>(blocks.begin(), blocks.end()), expected);
  EXPECT_EQ(blocks.size(), 2u);
  std::set<Vertex> inner;
  for (const auto& b : blocks)
    for (Vertex v : b)
      if (report.has_ce(v)) {
        EXPECT_TRUE(inner.insert(v).second);
      }
}

TEST(Decomposition, CBlocksMatchBruteForce) {
  std::mt19937_64 rng(29);
  std::size_t nonempty = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Graph g = random_connected_graph(4 + trial % 6, 0.3, rng);
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g.order() - 1));
    const Vertex u = pick(rng);
    PebbleDistribution p(g);
    for (int i = 0; i < 4; ++i) {
      const Vertex v = pick(rng);
      if (v != u) p.add(v, 1);
    }
    CooperationOptions opts;
    opts.compute_m = false;
    const auto report = cooperation(p, UnitDistribution{u, static_cast<Count>(2 + trial % 4)}, opts);
    const auto blocks = c_blocks(g, report);
    const std::set<std::vector<Vertex>> got(blocks.begin(), blocks.end());
    ASSERT_EQ(got, oracle_c_blocks(g, report.per_vertex_ce));
    if (!blocks.empty()) ++nonempty;
  }
  EXPECT_GT(nonempty, 30u);
}

TEST(Decomposition, Trajectory) {
  const std::vector<PebblingMove> line{{0, 1}, {1, 2}, {0, 1}};
  const auto t = trajectory(line);
  EXPECT_EQ(t.arcs.size(), 2u);
  EXPECT_TRUE(t.acyclic());
  const std::vector<PebblingMove> loop{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_FALSE(trajectory(loop).acyclic());
  const std::vector<PebblingMove> back{{0, 1}, {1, 0}};
  EXPECT_FALSE(trajectory(back).acyclic());
}

}  // namespace
}  // namespace pebble
