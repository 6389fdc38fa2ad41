#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "pebble/aux_graph.hpp"
#include "pebble/verify.hpp"

namespace pebble {
namespace {

const MValue kInf = MValue::infinite();

AuxVertex lab(std::uint32_t c1, bool c2, bool c3, MValue c4, std::string tag) {
  AuxVertex v;
  v.c1 = c1;
  v.c2 = c2;
  v.c3 = c3;
  v.c4 = c4;
  v.tag = std::move(tag);
  return v;
}

AuxIndex by_tag(const AuxGraph& a, const std::string& tag) {
  for (AuxIndex i = 0; i < a.order(); ++i)
    if (a[i].tag == tag) return i;
  ADD_FAILURE() << "no vertex tagged " << tag;
  return 0;
}

bool has_tag(const AuxGraph& a, const std::string& tag) {
  for (AuxIndex i = 0; i < a.order(); ++i)
    if (a[i].tag == tag) return true;
  return false;
}

TEST(Aux, A0FromPathExample) {
  const Graph g = make_path(4);
  const auto a = build_a0(g, PebbleDistribution(g, {{1, 1}}), {2, 2});
  ASSERT_EQ(a.order(), 4u);
  EXPECT_EQ(a[0].c1, 0u);
  EXPECT_TRUE(a[0].c2);
  EXPECT_FALSE(a[0].c3);
  EXPECT_TRUE(a[0].c4.is_infinite());
  EXPECT_EQ(a[1].c1, 1u);
  EXPECT_FALSE(a[1].c2);
  EXPECT_TRUE(a[1].c3);
  EXPECT_EQ(a[1].c4, MValue(0));
  EXPECT_EQ(a.sums(), (CoordinateSums{1, 1, 1}));
  EXPECT_EQ(a.delta(), 2u);
  EXPECT_THROW(build_a0(g, PebbleDistribution(g, {{1, 1}}), {2, 1}), Error);
}

TEST(Aux, A0WithoutInteraction) {
  const Graph g = make_path(3);
  const auto a = build_a0(g, PebbleDistribution(g, {{0, 1}}), {2, 2});
  for (AuxIndex i = 0; i < a.order(); ++i) {
    EXPECT_EQ(a[i].c1, 0u);
    EXPECT_FALSE(a[i].c2);
  }
  EXPECT_TRUE(a_blocks(a).empty());
}

// Sums of A_0 restate the cooperation report.
TEST(Aux, A0SumsMatchCooperation) {
  const Graph g = make_grid(3, 3);
  for (Vertex u = 0; u < 9; ++u) {
    PebbleDistribution p(g);
    p.add((u + 4) % 9, 1);
    p.add((u + 7) % 9, 1);
    const UnitDistribution unit{u, 4};
    const auto r = cooperation(p, unit);
    const auto a = build_a0(g, p, unit);
    EXPECT_EQ(a.sums(), (CoordinateSums{r.ce, static_cast<std::int64_t>(r.coop), static_cast<std::int64_t>(r.dc)}));
  }
}

TEST(Aux, FindSaturated) {
  const std::set<std::pair<AuxIndex, AuxIndex>> none;
  EXPECT_FALSE(find_saturated(AuxGraph({lab(1, false, false, MValue(0), "a"), lab(0, true, false, kInf, "b")},
                                       none, 3)));
  EXPECT_EQ(find_saturated(AuxGraph({lab(0, false, false, MValue(0), "a"), lab(1, true, false, MValue(2), "b")},
                                    none, 3)),
            AuxIndex{1});
  EXPECT_EQ(find_saturated(AuxGraph({lab(1, true, false, MValue(1), "a"), lab(1, true, false, MValue(3), "b"),
                                     lab(1, true, false, MValue(3), "c")},
                                    none, 3)),
            AuxIndex{1});
}

// x with c2 = 0, delta 4. R = {w, r}: both saturated neighbors of x other
// than y are split.
AuxGraph t1_fixture() {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),  // 0
      lab(3, false, true, MValue(2), "x"),  // 1
      lab(0, false, true, MValue(0), "y"),  // 2
      lab(1, true, false, MValue(4), "r"),  // 3
      lab(0, false, false, kInf, "z"),      // 4
      lab(1, false, false, MValue(1), "q"), // 5
  };
  return AuxGraph(v, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {3, 5}, {0, 5}}, 4);
}

TEST(Aux, Transformation1Bullets) {
  const AuxGraph a = t1_fixture();
  const AuxGraph b = transform1(a, 0, 1);
  EXPECT_EQ(b.sums(), a.sums());
  // 2 + |R| more vertices, no x4
  EXPECT_EQ(b.order(), a.order() + 2 + 2);
  EXPECT_FALSE(has_tag(b, "x4"));
  EXPECT_LT(b.saturated_count(), a.saturated_count());
  EXPECT_EQ(b.saturated_count(), 0u);

  const auto x1 = by_tag(b, "x1"), x2 = by_tag(b, "x2"), x3 = by_tag(b, "x3");
  const auto y = by_tag(b, "y"), z = by_tag(b, "z"), q = by_tag(b, "q");
  const auto w1 = by_tag(b, "w1"), w2 = by_tag(b, "w2"), r1 = by_tag(b, "r1"), r2 = by_tag(b, "r2");
  EXPECT_EQ(b[x1].c1, 1u);
  EXPECT_EQ(b[x2].c1, 1u);
  EXPECT_TRUE(b[x2].c3);
  EXPECT_EQ(b[x3].c1, 1u);
  EXPECT_EQ(b[x2].c4, MValue(2));
  EXPECT_TRUE(b.adjacent(x2, y));
  EXPECT_TRUE(b.adjacent(x2, x1));
  EXPECT_TRUE(b.adjacent(x2, x3));
  EXPECT_TRUE(b.adjacent(x3, z));
  EXPECT_FALSE(b.adjacent(x1, y));
  for (auto leaf : {w1, r1}) {
    EXPECT_EQ(b.neighbors(leaf), std::vector<AuxIndex>{x1});
    EXPECT_EQ(b[leaf].c1, 0u);
    EXPECT_TRUE(b[leaf].c2);
  }
  EXPECT_TRUE(b.adjacent(w2, x3));
  EXPECT_TRUE(b.adjacent(w2, q));
  EXPECT_TRUE(b.adjacent(r2, x3));
  EXPECT_TRUE(b.adjacent(r2, q));
  EXPECT_FALSE(b[w2].c2);
  EXPECT_EQ(b[w2].c1, 1u);
  EXPECT_LE(b.max_degree(), 4u);
}

TEST(Aux, Transformation1Preconditions) {
  const AuxGraph a = t1_fixture();
  EXPECT_THROW(transform1(a, 1, 0), Error);  // w not saturated
  EXPECT_THROW(transform1(a, 0, 5), Error);  // c1 too small
  EXPECT_THROW(transform1(a, 3, 5), Error);
  try {
    transform1(a, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition_violated);
  }
}

TEST(Aux, Transformation1CooperationLeafDelta4) {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),
      lab(3, true, false, MValue(2), "x"),
      lab(0, false, true, MValue(0), "y"),
  };
  const AuxGraph a(v, {{0, 1}, {1, 2}}, 4);
  const AuxGraph b = transform1(a, 0, 1);
  EXPECT_EQ(b.sums(), a.sums());
  const auto x4 = by_tag(b, "x4");
  EXPECT_EQ(b.neighbors(x4), std::vector<AuxIndex>{by_tag(b, "x2")});
  EXPECT_TRUE(b[x4].c2);
  EXPECT_EQ(b[x4].c1, 0u);
  EXPECT_EQ(b.saturated_count(), 0u);
}

// delta 3, x saturated and x^1 has room: x^4 hangs on x^1.
TEST(Aux, Transformation1Delta3SpareDegree) {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),
      lab(3, true, false, MValue(2), "x"),
      lab(0, false, true, MValue(0), "y"),
  };
  const AuxGraph a(v, {{0, 1}, {1, 2}}, 3);
  const AuxGraph b = transform1(a, 0, 1);
  EXPECT_EQ(b.sums(), a.sums());
  EXPECT_EQ(b.neighbors(by_tag(b, "x4")), std::vector<AuxIndex>{by_tag(b, "x1")});
  EXPECT_LE(b.max_degree(), 3u);
  EXPECT_EQ(b.saturated_count(), 0u);
}

// delta 3 with x^1 and x^3 both full and y heavy: the cooperation flag moves
// onto x^2.
TEST(Aux, Transformation1Delta3FullViaY) {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),
      lab(3, true, false, MValue(2), "x"),
      lab(3, false, true, MValue(0), "y"),
      lab(1, true, false, MValue(4), "r"),
  };
  const AuxGraph a(v, {{0, 1}, {1, 2}, {1, 3}}, 3);
  const AuxGraph b = transform1(a, 0, 1);
  EXPECT_EQ(b.sums(), a.sums());
  EXPECT_FALSE(has_tag(b, "x4"));
  EXPECT_TRUE(b[by_tag(b, "x2")].c2);
  EXPECT_FALSE(b[by_tag(b, "x3")].c2);
  EXPECT_LE(b.max_degree(), 3u);
  EXPECT_LT(b.saturated_count(), a.saturated_count());
}

// Same shape but the heavy lower neighbor of x is not y: the flag goes to x^3.
TEST(Aux, Transformation1Delta3FullViaOther) {
  std::vector<AuxVertex> v{
      lab(3, true, false, MValue(5), "w"),
      lab(3, true, false, MValue(2), "x"),
      lab(0, false, true, MValue(0), "y"),
      lab(3, true, false, MValue(1), "r"),
  };
  const AuxGraph a(v, {{0, 1}, {1, 2}, {1, 3}}, 3);
  const AuxGraph b = transform1(a, 0, 1);
  EXPECT_EQ(b.sums(), a.sums());
  EXPECT_TRUE(b[by_tag(b, "x3")].c2);
  EXPECT_FALSE(b[by_tag(b, "x2")].c2);
  EXPECT_LE(b.max_degree(), 3u);

  // without any heavy lower neighbor the variant refuses
  std::vector<AuxVertex> u = v;
  u[3].c1 = 1;
  u[3].c4 = MValue(4);
  EXPECT_THROW(transform1(AuxGraph(u, {{0, 1}, {1, 2}, {1, 3}}, 3), 0, 1), Error);
}

AuxGraph t2_fixture() {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),  // 0
      lab(1, false, true, MValue(1), "y"),  // 1
      lab(1, false, false, MValue(2), "x"), // 2
      lab(0, false, false, kInf, "z"),      // 3
      lab(2, false, false, MValue(3), "s"), // 4
  };
  return AuxGraph(v, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 4);
}

TEST(Aux, Transformation2Bullets) {
  const AuxGraph a = t2_fixture();
  const AuxGraph b = transform2(a, 0);
  EXPECT_EQ(b.sums(), a.sums());
  EXPECT_EQ(b.order(), a.order() + 1);
  EXPECT_FALSE(has_tag(b, "w"));
  const auto w1 = by_tag(b, "w1"), w2 = by_tag(b, "w2");
  const auto x = by_tag(b, "x"), y = by_tag(b, "y");
  EXPECT_EQ(b.neighbors(w1), std::vector<AuxIndex>{x});
  EXPECT_EQ(b.degree(w2), a.degree(0) - 1);
  EXPECT_FALSE(b.adjacent(w2, y));
  EXPECT_TRUE(b.adjacent(w2, x));
  EXPECT_FALSE(b[w1].saturated());
  EXPECT_FALSE(b[w2].saturated());
  EXPECT_EQ(b[w2].c1, 1u);
  EXPECT_EQ(b[w1].c4, MValue(5));
  // the literal construction joins x to both descendants
  EXPECT_EQ(b.degree(x), a.degree(2) + 1);
}

TEST(Aux, Transformation2NeedsTwoLowerNeighbors) {
  std::vector<AuxVertex> v{
      lab(1, true, false, MValue(5), "w"),
      lab(1, false, true, MValue(1), "y"),
      lab(0, false, false, MValue(2), "x"),
  };
  EXPECT_THROW(transform2(AuxGraph(v, {{0, 1}, {0, 2}}, 3), 0), Error);
}

// x saturated of degree 3, delta 3, neighbors y, v, w with v and w
// saturated and no heavy lower neighbor.
AuxGraph t3_fixture() {
  std::vector<AuxVertex> v{
      lab(1, false, false, MValue(0), "y"),  // 0
      lab(3, true, false, MValue(2), "x"),   // 1
      lab(1, true, false, MValue(1), "v"),   // 2
      lab(1, true, false, MValue(5), "w"),   // 3
      lab(1, false, true, MValue(0), "q1"),  // 4
      lab(1, false, true, MValue(0), "q2"),  // 5
      lab(0, false, true, kInf, "e"),        // 6
  };
  return AuxGraph(v, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 6}, {0, 6}}, 3);
}

TEST(Aux, Transformation3Bullets) {
  const AuxGraph a = t3_fixture();
  const AuxGraph b = transform3(a, 1);
  EXPECT_EQ(b.sums(), a.sums());
  EXPECT_LE(b.max_degree(), 3u);
  EXPECT_LT(b.saturated_count(), a.saturated_count());
  const auto x1 = by_tag(b, "x1"), x2 = by_tag(b, "x2"), x3 = by_tag(b, "x3");
  EXPECT_EQ(b[x2].c1, 1u);
  EXPECT_TRUE(b[x2].c2);
  EXPECT_TRUE(b.adjacent(x2, by_tag(b, "y")));
  EXPECT_TRUE(b.adjacent(x2, x3));
  EXPECT_TRUE(b.adjacent(x1, x3));
  EXPECT_FALSE(b.adjacent(x1, x2));
  EXPECT_TRUE(b.adjacent(by_tag(b, "v1"), x1));
  EXPECT_TRUE(b.adjacent(by_tag(b, "w1"), x1));
  EXPECT_TRUE(b.adjacent(by_tag(b, "v2"), x2));
  EXPECT_TRUE(b.adjacent(by_tag(b, "w2"), x3));
  EXPECT_TRUE(b.adjacent(by_tag(b, "v2"), by_tag(b, "q1")));
  EXPECT_TRUE(b.adjacent(by_tag(b, "w2"), by_tag(b, "e")));
}

TEST(Aux, Transformation3Preconditions) {
  const AuxGraph a = t3_fixture();
  EXPECT_THROW(transform3(a, 0), Error);
  EXPECT_THROW(transform3(AuxGraph(a.vertices(), a.edge_set(), 4), 1), Error);
}

TEST(Aux, FixpointDispatchesTransformation3) {
  const AuxGraph a = t3_fixture();
  const auto result = run_to_fixpoint(a);
  ASSERT_FALSE(result.trace.empty());
  EXPECT_EQ(result.trace.front().kind, 3);
  EXPECT_EQ(result.graph.saturated_count(), 0u);
  EXPECT_EQ(result.graph.sums(), a.sums());
  for (const auto& step : result.trace) EXPECT_EQ(step.after, a.sums());

  std::ostringstream out;
  write_trace(out, result.trace);
  const std::regex line(R"(step=\d+ kind=[123] pivot=\d+ sums=-?\d+,-?\d+,-?\d+)");
  std::istringstream in(out.str());
  std::string text;
  std::size_t lines = 0;
  while (std::getline(in, text)) {
    EXPECT_TRUE(std::regex_match(text, line)) << text;
    ++lines;
  }
  EXPECT_EQ(lines, result.trace.size());
}

TEST(Aux, FixpointLeavesCleanGraphAlone) {
  std::vector<AuxVertex> v{lab(1, false, true, MValue(0), "a"), lab(0, true, false, kInf, "b")};
  const AuxGraph a(v, {{0, 1}}, 3);
  const auto result = run_to_fixpoint(a);
  EXPECT_TRUE(result.trace.empty());
  EXPECT_EQ(result.graph.edge_set(), a.edge_set());
  EXPECT_THROW(run_to_fixpoint(AuxGraph(v, {{0, 1}}, 2)), Error);
}

TEST(Aux, FixpointStepLimit) {
  FixpointOptions options;
  options.max_steps = 0;
  try {
    run_to_fixpoint(t3_fixture(), options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_termination);
  }
}

TEST(Aux, BlockWitnessNegativeControl) {
  // one A-block {a, b}: a has c1 > 0 and no c3, b is a cooperation vertex
  std::vector<AuxVertex> v{lab(1, false, false, MValue(0), "a"), lab(0, true, false, kInf, "b")};
  const AuxGraph a(v, {{0, 1}}, 3);
  const auto report = check_aux_properties(a);
  EXPECT_FALSE(report.block_witnesses.pass);
  EXPECT_NE(report.block_witnesses.witness.find("A-block {0,1}"), std::string::npos);
  EXPECT_FALSE(report.all_pass());
}

TEST(Aux, SaturatedSupportNegativeControl) {
  std::vector<AuxVertex> v{lab(1, true, false, MValue(3), "c"), lab(1, false, true, MValue(1), "d")};
  const auto report = check_aux_properties(AuxGraph(v, {{0, 1}}, 3));
  EXPECT_FALSE(report.saturated_support.pass);
  EXPECT_NE(report.saturated_support.witness.find("0"), std::string::npos);
}

TEST(Aux, BlockAudit) {
  std::vector<AuxVertex> v{
      lab(1, false, true, MValue(0), "a"),
      lab(0, true, false, kInf, "b"),
      lab(0, true, false, kInf, "c"),
      lab(0, true, false, kInf, "d"),
      lab(0, false, false, kInf, "e"),
  };
  const AuxGraph a(v, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 3);
  const auto audit = audit_blocks(a);
  EXPECT_EQ(audit.blocks, 1u);
  // c2 - c3 = 3 - 1 > 1 * 1
  EXPECT_EQ(audit.lemma_violations, 1u);
  // b = 4 > 1 * 1 + 2 fails as well
  EXPECT_EQ(audit.counting_violations, 1u);
  EXPECT_FALSE(audit.global_ok);
}

// Every small instance: A_0 satisfies (8)-(11); each step keeps them and the
// sums; the fixpoint is saturated-free and passes the block audit.
TEST(Aux, SmallGraphSweep) {
  VerifyOptions options;
  options.max_n = 5;
  options.max_pebbles = 3;
  std::size_t runs = 0;
  for (std::size_t n = 4; n <= 5; ++n) {
    for (const auto& g : enumerate_connected_graphs(n)) {
      if (g.max_degree() < 3) continue;
      for (Vertex u = 0; u < n; ++u) {
        std::vector<bool> forbidden(n, false);
        forbidden[u] = true;
        for_each_distribution(n, options.max_pebbles, forbidden, [&](const std::vector<Count>& c) {
          const PebbleDistribution p(g, c);
          for (Count s : {Count{2}, Count{3}, Count{4}}) {
            const AuxGraph a0 = build_a0(g, p, {u, s});
            ASSERT_TRUE(check_aux_properties(a0).all_pass()) << describe(g, p, {u, s});
            FixpointOptions fo;
            fo.check_each_step = true;
            const auto result = run_to_fixpoint(a0, fo);
            ASSERT_TRUE(result.property_failures.empty()) << describe(g, p, {u, s});
            ASSERT_EQ(result.graph.sums(), a0.sums());
            ASSERT_EQ(result.graph.saturated_count(), 0u);
            const auto audit = audit_blocks(result.graph);
            ASSERT_EQ(audit.lemma_violations, 0u);
            ASSERT_EQ(audit.counting_violations, 0u);
            ASSERT_TRUE(audit.global_ok);
            ++runs;
          }
        });
      }
    }
  }
  // saturated vertices are rare this small; the fixtures above exercise the
  // transformations themselves
  EXPECT_GT(runs, 1000u);
}

}  // namespace
}  // namespace pebble
