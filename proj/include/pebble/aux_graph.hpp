#pragma once

// Labeled auxiliary graphs and the transformations that remove saturated
// vertices (cooperation vertices that also carry cooperation excess) while
// preserving the coordinate sums.
//
// Each vertex carries (c1, c2, c3, c4):
//   c1  cooperation excess amount
//   c2  1 iff cooperation vertex
//   c3  1 iff double covered
//   c4  M value (possibly infinite)
// A vertex is saturated when c1 * c2 > 0. An A-path is a path whose inner
// vertices have c1 > 0; an A-block is the closed neighborhood of a connected
// component of {c1 > 0}.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pebble/decomposition.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"

namespace pebble {

struct AuxVertex {
  std::uint32_t c1 = 0;
  bool c2 = false;
  bool c3 = false;
  MValue c4;
  // A_0 vertex this one descends from, and the descendant label ("x1", "r2",
  // ...); empty for A_0 vertices.
  std::uint32_t origin = 0;
  std::string tag;

  bool saturated() const noexcept { return c1 > 0 && c2; }
  // third coordinate 1, or first two coordinates 0
  bool witness() const noexcept { return c3 || (c1 == 0 && !c2); }
};

struct CoordinateSums {
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;
  std::int64_t c3 = 0;

  friend bool operator==(const CoordinateSums&, const CoordinateSums&) = default;
};

using AuxIndex = std::size_t;

class AuxGraph {
 public:
  AuxGraph() = default;
  AuxGraph(std::vector<AuxVertex> vertices, const std::set<std::pair<AuxIndex, AuxIndex>>& edges,
           std::size_t delta)
      : vertices_(std::move(vertices)), adjacency_(vertices_.size()), delta_(delta) {
    for (auto [a, b] : edges) {
      if (a >= vertices_.size() || b >= vertices_.size() || a == b) {
        throw Error(ErrorCode::invalid_edge, "bad auxiliary edge");
      }
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& nb : adjacency_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  std::size_t order() const noexcept { return vertices_.size(); }
  std::size_t delta() const noexcept { return delta_; }
  const AuxVertex& operator[](AuxIndex i) const { return vertices_.at(i); }
  const std::vector<AuxVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<AuxIndex>& neighbors(AuxIndex i) const { return adjacency_.at(i); }
  std::size_t degree(AuxIndex i) const { return neighbors(i).size(); }

  bool adjacent(AuxIndex a, AuxIndex b) const {
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& nb : adjacency_) d = std::max(d, nb.size());
    return d;
  }

  std::set<std::pair<AuxIndex, AuxIndex>> edge_set() const {
    std::set<std::pair<AuxIndex, AuxIndex>> edges;
    for (AuxIndex a = 0; a < order(); ++a)
      for (AuxIndex b : adjacency_[a])
        if (a < b) edges.emplace(a, b);
    return edges;
  }

  CoordinateSums sums() const {
    CoordinateSums s;
    for (const auto& v : vertices_) {
      s.c1 += v.c1;
      s.c2 += v.c2;
      s.c3 += v.c3;
    }
    return s;
  }

  std::size_t saturated_count() const {
    return static_cast<std::size_t>(
        std::count_if(vertices_.begin(), vertices_.end(), [](const AuxVertex& v) { return v.saturated(); }));
  }

 private:
  std::vector<AuxVertex> vertices_;
  std::vector<std::vector<AuxIndex>> adjacency_;
  std::size_t delta_ = 0;
};

// A_0 from a cooperation report of (P, U) computed with M values.
inline AuxGraph aux_from_report(const Graph& g, const CooperationReport& report) {
  if (report.m_values.size() != g.order()) {
    throw Error(ErrorCode::precondition_violated, "cooperation report lacks M values");
  }
  std::vector<AuxVertex> vertices(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    if (report.per_vertex_ce[v] < 0) {
      throw Error(ErrorCode::precondition_violated, "negative cooperation excess at " + std::to_string(v));
    }
    auto& a = vertices[v];
    a.c1 = static_cast<std::uint32_t>(report.per_vertex_ce[v]);
    a.c2 = report.is_coop(v);
    a.c3 = report.is_dc(v);
    a.c4 = report.m_values[v];
    a.origin = v;
  }
  std::set<std::pair<AuxIndex, AuxIndex>> edges;
  for (auto [a, b] : g.edges()) edges.emplace(a, b);
  return AuxGraph(std::move(vertices), edges, g.max_degree());
}

// A_0: a copy of G labeled from the cooperation report of (P, U).
inline AuxGraph build_a0(const Graph& g, const PebbleDistribution& p, const UnitDistribution& u,
                         AnalysisCache* cache = nullptr) {
  if (u.count < 2) throw Error(ErrorCode::unit_too_small, "auxiliary graphs need a unit of two or more pebbles");
  if (!(p.graph() == g)) throw Error(ErrorCode::graph_mismatch, "distribution is on another graph");
  CooperationOptions options;
  options.cache = cache;
  return aux_from_report(g, cooperation(p, u, options));
}

// Saturated vertex with maximal c4; ties go to the lowest index.
inline std::optional<AuxIndex> find_saturated(const AuxGraph& a) {
  std::optional<AuxIndex> best;
  for (AuxIndex i = 0; i < a.order(); ++i) {
    if (!a[i].saturated()) continue;
    if (!best || a[*best].c4 < a[i].c4) best = i;
  }
  return best;
}

namespace detail {

// Deletions, insertions and rewiring against a snapshot; finish() compacts
// indices (survivors keep their relative order, new vertices are appended).
class AuxEditor {
 public:
  explicit AuxEditor(const AuxGraph& a)
      : source_(a), vertices_(a.vertices()), removed_(a.order(), false), edges_(a.edge_set()) {}

  AuxIndex add(AuxVertex v) {
    vertices_.push_back(std::move(v));
    removed_.push_back(false);
    return vertices_.size() - 1;
  }

  void remove(AuxIndex i) { removed_.at(i) = true; }
  void connect(AuxIndex a, AuxIndex b) {
    if (a == b) throw Error(ErrorCode::invalid_edge, "auxiliary self-loop");
    edges_.emplace(std::min(a, b), std::max(a, b));
  }

  AuxVertex& vertex(AuxIndex i) { return vertices_.at(i); }

  // A child of `parent` inheriting its provenance.
  AuxVertex child(AuxIndex parent, const std::string& label) const {
    AuxVertex v;
    v.origin = source_[parent].origin;
    v.tag = source_[parent].tag + label;
    v.c4 = source_[parent].c4;
    return v;
  }

  std::size_t degree(AuxIndex i) const {
    std::size_t d = 0;
    for (auto [a, b] : edges_)
      if ((a == i && !removed_[b]) || (b == i && !removed_[a])) ++d;
    return d;
  }

  AuxGraph finish() const {
    std::vector<AuxIndex> remap(vertices_.size(), 0);
    std::vector<AuxVertex> kept;
    for (AuxIndex i = 0; i < vertices_.size(); ++i) {
      if (removed_[i]) continue;
      remap[i] = kept.size();
      kept.push_back(vertices_[i]);
    }
    std::set<std::pair<AuxIndex, AuxIndex>> edges;
    for (auto [a, b] : edges_) {
      if (removed_[a] || removed_[b]) continue;
      edges.emplace(std::min(remap[a], remap[b]), std::max(remap[a], remap[b]));
    }
    return AuxGraph(std::move(kept), edges, source_.delta());
  }

  // Index a vertex of the source graph will have after finish().
  AuxIndex final_index(AuxIndex i) const {
    AuxIndex out = 0;
    for (AuxIndex j = 0; j < i; ++j)
      if (!removed_[j]) ++out;
    return out;
  }

 private:
  const AuxGraph& source_;
  std::vector<AuxVertex> vertices_;
  std::vector<bool> removed_;
  std::set<std::pair<AuxIndex, AuxIndex>> edges_;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::precondition_violated, what);
}

// Neighbor of i minimizing (c4, index), optionally filtered.
template <class Pred>
std::optional<AuxIndex> min_c4_neighbor(const AuxGraph& a, AuxIndex i, Pred pred) {
  std::optional<AuxIndex> best;
  for (AuxIndex n : a.neighbors(i)) {
    if (!pred(n)) continue;
    if (!best || a[n].c4 < a[*best].c4) best = n;
  }
  return best;
}

// Splits r into a leaf r1 = (0,1,0,r4) and r2 = (r1,0,r3,r4); returns {r1, r2}.
inline std::pair<AuxIndex, AuxIndex> split_saturated(AuxEditor& ed, const AuxGraph& a, AuxIndex r) {
  AuxVertex leaf = ed.child(r, "1");
  leaf.c1 = 0;
  leaf.c2 = true;
  leaf.c3 = false;
  AuxVertex body = ed.child(r, "2");
  body.c1 = a[r].c1;
  body.c2 = false;
  body.c3 = a[r].c3;
  ed.remove(r);
  return {ed.add(std::move(leaf)), ed.add(std::move(body))};
}

// Reconnects each split vertex's body to the old neighbors of the vertex,
// following other split vertices to their bodies. `skip` is the center whose
// edges are rebuilt explicitly.
inline void rewire_bodies(AuxEditor& ed, const AuxGraph& a, const std::map<AuxIndex, AuxIndex>& body_of,
                          AuxIndex skip) {
  for (auto [r, body] : body_of) {
    for (AuxIndex z : a.neighbors(r)) {
      if (z == skip) continue;
      auto it = body_of.find(z);
      ed.connect(body, it == body_of.end() ? z : it->second);
    }
  }
}

// First half of property (8) at c: a neighbor d with d1 >= 3 and d4 < c4.
inline bool has_heavy_lower_neighbor(const AuxGraph& a, AuxIndex c) {
  for (AuxIndex d : a.neighbors(c))
    if (a[d].c1 >= 3 && a[d].c4 < a[c].c4) return true;
  return false;
}

inline std::vector<AuxIndex> positive_lower_neighbors(const AuxGraph& a, AuxIndex c) {
  std::vector<AuxIndex> out;
  for (AuxIndex d : a.neighbors(c))
    if (a[d].c1 > 0 && a[d].c4 < a[c].c4) out.push_back(d);
  return out;
}

}  // namespace detail

// Transformation 1 around x, a neighbor of the saturated pivot w with
// x1 >= 3 and x4 < w4.
//   y : neighbor of x with minimal c4
//   R : saturated neighbors of x other than y, each split into a leaf r1
//       hung on x^1 and a body r2 hung on x^3 and r's old neighbors
//   x : replaced by x^1 = (1,0,0,x4), x^2 = (x1-2,0,x3,x4), x^3 = (1,0,0,x4)
//       with x^2 adjacent to y, x^1 and x^3; the rest of x's neighbors go to x^3
//   x^4 = (0,1,0,x4) is hung on x^2 when x was a cooperation vertex.
// With delta == 3 a saturated x cannot take x^4 on x^2: it goes to x^1 or x^3
// when one of them has spare degree; otherwise the cooperation flag moves to
// x^2 (if y is a heavy lower neighbor of x) or to x^3, and no x^4 is made.
inline AuxGraph transform1(const AuxGraph& a, AuxIndex w, AuxIndex x) {
  using detail::require;
  require(w < a.order() && x < a.order(), "transform1: vertex out of range");
  require(a[w].saturated(), "transform1: w is not saturated");
  require(a.adjacent(w, x), "transform1: x is not a neighbor of w");
  require(a[x].c1 >= 3, "transform1: x needs c1 >= 3");
  require(a[x].c4 < a[w].c4, "transform1: x needs c4 below w");
  require(a.delta() >= 3, "transform1: delta must be at least 3");

  const AuxIndex y = *detail::min_c4_neighbor(a, x, [](AuxIndex) { return true; });
  std::vector<AuxIndex> R;
  for (AuxIndex n : a.neighbors(x))
    if (n != y && a[n].saturated()) R.push_back(n);

  detail::AuxEditor ed(a);
  AuxVertex v1 = ed.child(x, "1");
  v1.c1 = 1;
  AuxVertex v2 = ed.child(x, "2");
  v2.c1 = a[x].c1 - 2;
  v2.c3 = a[x].c3;
  AuxVertex v3 = ed.child(x, "3");
  v3.c1 = 1;
  ed.remove(x);
  const AuxIndex x1 = ed.add(std::move(v1));
  const AuxIndex x2 = ed.add(std::move(v2));
  const AuxIndex x3 = ed.add(std::move(v3));
  ed.connect(x2, y);
  ed.connect(x2, x1);
  ed.connect(x2, x3);

  std::map<AuxIndex, AuxIndex> body_of;
  for (AuxIndex r : R) {
    auto [leaf, body] = detail::split_saturated(ed, a, r);
    ed.connect(leaf, x1);
    ed.connect(body, x3);
    body_of[r] = body;
  }
  detail::rewire_bodies(ed, a, body_of, x);
  for (AuxIndex n : a.neighbors(x)) {
    if (n == y || body_of.count(n)) continue;
    ed.connect(n, x3);
  }

  if (a[x].c2) {
    if (a.delta() >= 4) {
      AuxVertex extra = ed.child(x, "4");
      extra.c2 = true;
      ed.connect(ed.add(std::move(extra)), x2);
    } else if (ed.degree(x1) < 3 || ed.degree(x3) < 3) {
      const AuxIndex host = ed.degree(x1) < 3 ? x1 : x3;
      AuxVertex extra = ed.child(x, "4");
      extra.c2 = true;
      ed.connect(ed.add(std::move(extra)), host);
    } else {
      require(detail::has_heavy_lower_neighbor(a, x),
              "transform1: delta 3 with a full saturated x needs a heavy lower neighbor (use transform3)");
      const bool via_y = a[y].c1 >= 3 && a[y].c4 < a[x].c4;
      ed.vertex(via_y ? x2 : x3).c2 = true;
    }
  }
  return ed.finish();
}

// Transformation 2 at a saturated w with two neighbors of positive c1 and c4
// below w4. Among those neighbors, y and x minimize c4 with x4 >= y4. w is
// replaced by a leaf w^1 = (0,1,0,w4) on x and w^2 = (w1,0,w3,w4) on every old
// neighbor except y.
inline AuxGraph transform2(const AuxGraph& a, AuxIndex w) {
  using detail::require;
  require(w < a.order(), "transform2: vertex out of range");
  require(a[w].saturated(), "transform2: w is not saturated");
  auto lower = detail::positive_lower_neighbors(a, w);
  require(lower.size() >= 2, "transform2: w needs two positive neighbors with smaller c4");
  std::stable_sort(lower.begin(), lower.end(), [&](AuxIndex p, AuxIndex q) { return a[p].c4 < a[q].c4; });
  const AuxIndex y = lower[0];
  const AuxIndex x = lower[1];

  detail::AuxEditor ed(a);
  auto [leaf, body] = detail::split_saturated(ed, a, w);
  ed.connect(leaf, x);
  for (AuxIndex n : a.neighbors(w))
    if (n != y) ed.connect(body, n);
  return ed.finish();
}

// Transformation 3 (delta == 3) at a saturated x of degree 3 whose neighbors
// are y (minimal c4) and two saturated vertices v, w with v4 <= w4:
//   x^1 = (1,0,0,x4), x^2 = (x1-2,1,x3,x4), x^3 = (1,0,0,x4)
//   edges x^2-y, x^2-x^3, x^1-x^3
//   v, w split into leaves v^1, w^1 on x^1 and bodies v^2 (on x^2) and w^2
//   (on x^3), each body also taking the old neighbors.
inline AuxGraph transform3(const AuxGraph& a, AuxIndex x) {
  using detail::require;
  require(x < a.order(), "transform3: vertex out of range");
  require(a.delta() == 3, "transform3: only for delta 3");
  require(a[x].saturated(), "transform3: x is not saturated");
  require(a.degree(x) == 3, "transform3: x must have degree 3");
  require(a[x].c1 >= 2, "transform3: x needs c1 >= 2");

  const AuxIndex y = *detail::min_c4_neighbor(a, x, [](AuxIndex) { return true; });
  std::vector<AuxIndex> others;
  for (AuxIndex n : a.neighbors(x))
    if (n != y) others.push_back(n);
  std::stable_sort(others.begin(), others.end(), [&](AuxIndex p, AuxIndex q) { return a[p].c4 < a[q].c4; });
  const AuxIndex v = others[0];
  const AuxIndex w = others[1];
  require(a[v].saturated() && a[w].saturated(), "transform3: the two non-minimal neighbors must be saturated");

  detail::AuxEditor ed(a);
  AuxVertex n1 = ed.child(x, "1");
  n1.c1 = 1;
  AuxVertex n2 = ed.child(x, "2");
  n2.c1 = a[x].c1 - 2;
  n2.c2 = true;
  n2.c3 = a[x].c3;
  AuxVertex n3 = ed.child(x, "3");
  n3.c1 = 1;
  ed.remove(x);
  const AuxIndex x1 = ed.add(std::move(n1));
  const AuxIndex x2 = ed.add(std::move(n2));
  const AuxIndex x3 = ed.add(std::move(n3));
  ed.connect(x2, y);
  ed.connect(x2, x3);
  ed.connect(x1, x3);

  auto [v_leaf, v_body] = detail::split_saturated(ed, a, v);
  auto [w_leaf, w_body] = detail::split_saturated(ed, a, w);
  ed.connect(v_leaf, x1);
  ed.connect(w_leaf, x1);
  ed.connect(v_body, x2);
  ed.connect(w_body, x3);
  detail::rewire_bodies(ed, a, {{v, v_body}, {w, w_body}}, x);
  return ed.finish();
}

// ---------------------------------------------------------------------------
// Blocks and audits

struct ABlock {
  std::vector<AuxIndex> members;
  CoordinateSums sums;
  std::size_t inner = 0;     // c1 > 0
  std::size_t boundary = 0;  // c1 == 0
  std::size_t witnesses = 0;
};

inline std::vector<ABlock> a_blocks(const AuxGraph& a) {
  std::vector<int> component(a.order(), -1);
  std::vector<ABlock> blocks;
  for (AuxIndex s = 0; s < a.order(); ++s) {
    if (a[s].c1 == 0 || component[s] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    std::vector<AuxIndex> inner{s};
    component[s] = id;
    for (std::size_t head = 0; head < inner.size(); ++head)
      for (AuxIndex y : a.neighbors(inner[head]))
        if (a[y].c1 > 0 && component[y] < 0) {
          component[y] = id;
          inner.push_back(y);
        }
    std::set<AuxIndex> members(inner.begin(), inner.end());
    for (AuxIndex x : inner)
      for (AuxIndex y : a.neighbors(x)) members.insert(y);
    ABlock block;
    block.members.assign(members.begin(), members.end());
    for (AuxIndex m : block.members) {
      const auto& v = a[m];
      block.sums.c1 += v.c1;
      block.sums.c2 += v.c2;
      block.sums.c3 += v.c3;
      (v.c1 > 0 ? block.inner : block.boundary) += 1;
      if (v.witness()) ++block.witnesses;
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

struct PropertyResult {
  bool pass = true;
  std::string witness;  // first failure, if any

  void fail(const std::string& what) {
    if (pass) witness = what;
    pass = false;
  }
};

// Properties (8)-(11) of the auxiliary-graph invariant:
//   (8)  every saturated c has a neighbor d with d1 >= 3, d4 < c4, or two
//        neighbors e, f with positive c1 and c4 below c4
//   (9)  if a1 >= 3 and a has a cooperation neighbor, some neighbor b has
//        b4 <= a4
//   (10) for saturated c and a neighbor a with a1 > 0 and a4 < c4, two
//        witnesses are joined to a by A-paths whose vertices all have c4
//        below c4
//   (11) every A-block contains two witnesses
// A witness has third coordinate 1 or first two coordinates 0.
struct AuxPropertyReport {
  PropertyResult saturated_support;   // (8)
  PropertyResult heavy_neighbor;      // (9)
  PropertyResult witness_paths;       // (10)
  PropertyResult block_witnesses;     // (11)

  bool all_pass() const {
    return saturated_support.pass && heavy_neighbor.pass && witness_paths.pass && block_witnesses.pass;
  }
};

inline AuxPropertyReport check_aux_properties(const AuxGraph& a) {
  AuxPropertyReport out;
  for (AuxIndex c = 0; c < a.order(); ++c) {
    if (!a[c].saturated()) continue;
    if (!detail::has_heavy_lower_neighbor(a, c) && detail::positive_lower_neighbors(a, c).size() < 2) {
      out.saturated_support.fail("saturated vertex " + std::to_string(c));
    }
  }
  for (AuxIndex v = 0; v < a.order(); ++v) {
    if (a[v].c1 < 3) continue;
    const auto& nb = a.neighbors(v);
    const bool coop_neighbor = std::any_of(nb.begin(), nb.end(), [&](AuxIndex n) { return a[n].c2; });
    if (!coop_neighbor) continue;
    const bool lower = std::any_of(nb.begin(), nb.end(), [&](AuxIndex n) { return a[n].c4 <= a[v].c4; });
    if (!lower) out.heavy_neighbor.fail("vertex " + std::to_string(v));
  }
  for (AuxIndex c = 0; c < a.order(); ++c) {
    if (!a[c].saturated()) continue;
    const MValue limit = a[c].c4;
    for (AuxIndex start : a.neighbors(c)) {
      if (a[start].c1 == 0 || !(a[start].c4 < limit)) continue;
      // BFS over A-paths from start inside {c4 < limit}; only the start and
      // vertices with c1 > 0 may be passed through.
      std::vector<bool> seen(a.order(), false);
      std::vector<AuxIndex> queue{start};
      seen[start] = true;
      std::size_t witnesses = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const AuxIndex p = queue[head];
        if (a[p].witness()) ++witnesses;
        if (p != start && a[p].c1 == 0) continue;
        for (AuxIndex q : a.neighbors(p)) {
          if (seen[q] || !(a[q].c4 < limit)) continue;
          seen[q] = true;
          queue.push_back(q);
        }
      }
      if (witnesses < 2) {
        out.witness_paths.fail("saturated " + std::to_string(c) + " via neighbor " + std::to_string(start));
      }
    }
  }
  for (const auto& block : a_blocks(a)) {
    if (block.witnesses < 2) {
      std::string members;
      for (AuxIndex m : block.members) members += (members.empty() ? "" : ",") + std::to_string(m);
      out.block_witnesses.fail("A-block {" + members + "}");
    }
  }
  return out;
}

struct BlockAudit {
  std::size_t blocks = 0;
  std::size_t lemma_violations = 0;     // sum c2 - sum c3 > (delta-2) sum c1
  std::size_t counting_violations = 0;  // b > (delta-2) i + 2
  bool global_ok = true;                // same inequality over the whole graph
};

inline BlockAudit audit_blocks(const AuxGraph& a) {
  BlockAudit audit;
  const auto slope = static_cast<std::int64_t>(a.delta()) - 2;
  for (const auto& b : a_blocks(a)) {
    ++audit.blocks;
    if (b.sums.c2 - b.sums.c3 > slope * b.sums.c1) ++audit.lemma_violations;
    if (static_cast<std::int64_t>(b.boundary) > slope * static_cast<std::int64_t>(b.inner) + 2) {
      ++audit.counting_violations;
    }
  }
  const auto s = a.sums();
  audit.global_ok = s.c2 - s.c3 <= slope * s.c1;
  return audit;
}

// ---------------------------------------------------------------------------
// Driver

struct TransformStep {
  std::size_t step = 0;
  int kind = 0;  // 1, 2 or 3
  AuxIndex pivot = 0;
  CoordinateSums before;
  CoordinateSums after;
  std::size_t saturated_before = 0;
  std::size_t saturated_after = 0;
  std::string note;
};

struct FixpointOptions {
  std::size_t max_steps = 10000;
  // Re-evaluate properties (8)-(11) after every step.
  bool check_each_step = false;
};

struct FixpointResult {
  AuxGraph graph;
  std::vector<TransformStep> trace;
  std::vector<std::string> property_failures;
};

// Applies transformations until no saturated vertex remains. The pivot w is
// the saturated vertex with maximal c4; Transformation 1 is preferred over
// Transformation 2 when both apply, and for delta == 3 a saturated x with no
// spare degree and no heavy lower neighbor is handled by Transformation 3.
inline FixpointResult run_to_fixpoint(AuxGraph a, const FixpointOptions& options = {}) {
  if (a.delta() < 3) {
    throw Error(ErrorCode::precondition_violated, "transformations need delta >= 3");
  }
  FixpointResult result;
  std::size_t step = 0;
  while (auto w = find_saturated(a)) {
    if (step >= options.max_steps) {
      throw Error(ErrorCode::non_termination, "no fixpoint after " + std::to_string(step) + " steps");
    }
    TransformStep rec;
    rec.step = ++step;
    rec.before = a.sums();
    rec.saturated_before = a.saturated_count();

    const auto x = detail::min_c4_neighbor(a, *w, [&](AuxIndex n) {
      return a[n].c1 >= 3 && a[n].c4 < a[*w].c4;
    });
    AuxGraph next;
    if (x) {
      const AuxIndex y = *detail::min_c4_neighbor(a, *x, [](AuxIndex) { return true; });
      if (a[y].saturated()) rec.note = "y saturated";
      std::size_t split = 0;
      for (AuxIndex n : a.neighbors(*x))
        if (n != y && a[n].saturated()) ++split;
      const bool full = a.delta() == 3 && a[*x].saturated() && split + 1 >= 3 && a.degree(*x) >= 3;
      if (full && !detail::has_heavy_lower_neighbor(a, *x)) {
        rec.kind = 3;
        rec.pivot = *x;
        next = transform3(a, *x);
      } else {
        rec.kind = 1;
        rec.pivot = *x;
        next = transform1(a, *w, *x);
      }
    } else if (detail::positive_lower_neighbors(a, *w).size() >= 2) {
      rec.kind = 2;
      rec.pivot = *w;
      next = transform2(a, *w);
    } else {
      throw Error(ErrorCode::precondition_violated,
                  "saturated vertex " + std::to_string(*w) + " admits neither transformation");
    }
    a = std::move(next);
    rec.after = a.sums();
    rec.saturated_after = a.saturated_count();
    if (options.check_each_step) {
      const auto props = check_aux_properties(a);
      if (!props.all_pass()) result.property_failures.push_back("after step " + std::to_string(rec.step));
    }
    result.trace.push_back(std::move(rec));
  }
  result.graph = std::move(a);
  return result;
}

// One line per step: "step=<n> kind=<1|2|3> pivot=<v> sums=<c1,c2,c3>".
inline void write_trace(std::ostream& out, const std::vector<TransformStep>& trace) {
  for (const auto& s : trace) {
    out << "step=" << s.step << " kind=" << s.kind << " pivot=" << s.pivot << " sums=" << s.after.c1 << ','
        << s.after.c2 << ',' << s.after.c3 << '\n';
  }
}

}  // namespace pebble
