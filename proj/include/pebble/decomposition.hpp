#pragma once

// Unit decompositions and the pairwise cooperation statistics between two
// disjoint distributions: cooperation vertices, double-covered vertices,
// cooperation excess, M values, and C-blocks.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pebble/distribution.hpp"
#include "pebble/engine.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"

namespace pebble {

struct UnitDistribution {
  Vertex vertex = 0;
  Count count = 0;

  PebbleDistribution on(const Graph& g) const {
    PebbleDistribution p(g);
    p.add(vertex, count);
    return p;
  }

  friend bool operator==(const UnitDistribution&, const UnitDistribution&) = default;
};

// Units sorted by size, ties by vertex index.
inline std::vector<UnitDistribution> decompose(const PebbleDistribution& p) {
  std::vector<UnitDistribution> units;
  for (Vertex v : p.support()) units.push_back({v, p[v]});
  std::stable_sort(units.begin(), units.end(),
                   [](const UnitDistribution& a, const UnitDistribution& b) {
                     return a.count != b.count ? a.count < b.count : a.vertex < b.vertex;
                   });
  return units;
}

inline PebbleDistribution sum(const PebbleDistribution& p, const PebbleDistribution& q) {
  if (!p.same_graph(q)) throw Error(ErrorCode::graph_mismatch, "distributions live on different graphs");
  PebbleDistribution out = p;
  for (Vertex v : q.support()) out.add(v, q[v]);
  return out;
}

// M value: a nonnegative count or infinity. Infinity orders above every
// finite value.
class MValue {
 public:
  constexpr MValue() = default;
  constexpr explicit MValue(std::uint32_t v) : value_(v) {}
  static constexpr MValue infinite() { return MValue(kInfinite); }

  constexpr bool is_infinite() const noexcept { return value_ == kInfinite; }
  constexpr std::uint32_t value() const noexcept { return value_; }

  friend constexpr auto operator<=>(MValue, MValue) = default;

  std::string str() const { return is_infinite() ? "inf" : std::to_string(value_); }

 private:
  static constexpr std::uint32_t kInfinite = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = 0;
};

struct CooperationReport {
  std::size_t coop = 0;
  std::size_t dc = 0;
  std::int64_t ce = 0;
  std::vector<std::int64_t> per_vertex_ce;
  // Filled only when the second distribution is a unit.
  std::vector<MValue> m_values;
  std::vector<Vertex> coop_vertices;
  std::vector<Vertex> dc_vertices;

  bool is_coop(Vertex v) const {
    return std::binary_search(coop_vertices.begin(), coop_vertices.end(), v);
  }
  bool is_dc(Vertex v) const { return std::binary_search(dc_vertices.begin(), dc_vertices.end(), v); }
  bool has_ce(Vertex v) const { return per_vertex_ce[v] > 0; }
  bool cooperation_free(Vertex v) const { return !is_coop(v) && per_vertex_ce[v] <= 0; }
};

namespace detail {

inline void require_disjoint(const PebbleDistribution& p, const PebbleDistribution& q) {
  if (!p.same_graph(q)) throw Error(ErrorCode::graph_mismatch, "distributions live on different graphs");
  if (!p.disjoint_with(q)) throw Error(ErrorCode::not_disjoint, "distributions share an occupied vertex");
}

inline const ReachabilityReport& analyzed(const PebbleDistribution& p, AnalysisCache* cache,
                                          ReachabilityReport& scratch) {
  if (cache) return cache->get(p);
  scratch = analyze(p);
  return scratch;
}

inline std::optional<UnitDistribution> as_unit(const PebbleDistribution& q) {
  auto support = q.support();
  if (support.size() != 1) return std::nullopt;
  return UnitDistribution{support[0], q[support[0]]};
}

}  // namespace detail

// Minimal number of cooperation vertices utilized by a sequence that puts two
// pebbles on v under P+U, for every v. A set S of cooperation vertices is
// enough for v exactly when v is 2-reachable while every cooperation vertex
// outside S is untouchable, so subsets are tried by increasing size.
inline std::vector<MValue> m_values(const PebbleDistribution& combined,
                                    const std::vector<Vertex>& coop_vertices,
                                    const std::vector<Count>& combined_reach) {
  const Graph& g = combined.graph();
  const std::size_t n = g.order();
  std::vector<MValue> m(n, MValue::infinite());
  std::vector<Vertex> pending;
  for (Vertex v = 0; v < n; ++v)
    if (combined_reach[v] >= 2) pending.push_back(v);

  const std::size_t c = coop_vertices.size();
  if (c > 24) throw Error(ErrorCode::budget_exceeded, "too many cooperation vertices for M values");

  std::vector<bool> blocked(n, false);
  std::vector<std::size_t> pick;
  for (std::size_t k = 0; k <= c && !pending.empty(); ++k) {
    // lexicographic k-subsets of coop_vertices
    pick.resize(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      for (Vertex cv : coop_vertices) blocked[cv] = true;
      for (std::size_t i : pick) blocked[coop_vertices[i]] = false;
      ReachOptions ro;
      ro.blocked = &blocked;
      std::erase_if(pending, [&](Vertex v) {
        if (k_reachable(combined, v, 2, ro)) {
          m[v] = MValue(static_cast<std::uint32_t>(k));
          return true;
        }
        return false;
      });
      if (pending.empty()) break;
      // advance combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == c - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  for (Vertex cv : coop_vertices) blocked[cv] = false;
  return m;
}

struct CooperationOptions {
  bool compute_m = true;
  AnalysisCache* cache = nullptr;
};

inline CooperationReport cooperation(const PebbleDistribution& p, const PebbleDistribution& q,
                                     const CooperationOptions& options = {}) {
  detail::require_disjoint(p, q);
  const PebbleDistribution s = sum(p, q);
  ReachabilityReport sp, sq, ss;
  const ReachabilityReport& rp = detail::analyzed(p, options.cache, sp);
  const ReachabilityReport& rq = detail::analyzed(q, options.cache, sq);
  const ReachabilityReport& rs = detail::analyzed(s, options.cache, ss);

  const std::size_t n = p.graph().order();
  CooperationReport out;
  out.per_vertex_ce.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    const bool in_p = rp.covered(v);
    const bool in_q = rq.covered(v);
    if (!in_p && !in_q && rs.covered(v)) out.coop_vertices.push_back(v);
    if (in_p && in_q) out.dc_vertices.push_back(v);
    out.per_vertex_ce[v] = static_cast<std::int64_t>(rs.excess[v]) - rp.excess[v] - rq.excess[v];
  }
  out.coop = out.coop_vertices.size();
  out.dc = out.dc_vertices.size();
  out.ce = static_cast<std::int64_t>(rs.total_excess) - static_cast<std::int64_t>(rp.total_excess) -
           static_cast<std::int64_t>(rq.total_excess);
  if (options.compute_m && detail::as_unit(q)) {
    out.m_values = m_values(s, out.coop_vertices, rs.reach);
  }
  return out;
}

inline CooperationReport cooperation(const PebbleDistribution& p, const UnitDistribution& u,
                                     const CooperationOptions& options = {}) {
  return cooperation(p, u.on(p.graph()), options);
}

inline MValue m_value(const PebbleDistribution& p, const UnitDistribution& u, Vertex v) {
  p.graph().check_vertex(v);
  const auto report = cooperation(p, u);
  if (report.m_values.empty()) {
    // zero-pebble unit: there are no cooperation vertices
    const auto s = sum(p, u.on(p.graph()));
    return m_values(s, report.coop_vertices, analyze(s).reach)[v];
  }
  return report.m_values[v];
}

// Sum over units of the total excess of each unit alone.
inline std::uint64_t unit_excess(const PebbleDistribution& p, AnalysisCache* cache = nullptr) {
  std::uint64_t total = 0;
  ReachabilityReport scratch;
  for (const auto& u : decompose(p)) {
    total += detail::analyzed(u.on(p.graph()), cache, scratch).total_excess;
  }
  return total;
}

// Both sides of the two decomposition identities, accumulated over the sorted
// unit decomposition U_1..U_t with partial sums S_{i-1} = U_1 + ... + U_{i-1}:
//   TE(P)  = sum TE(U_i)  + sum CE(S_{i-1}, U_i)
//   cov(P) = sum cov(U_i) + sum (coop(S_{i-1}, U_i) - DC(S_{i-1}, U_i))
struct IdentityCheck {
  std::int64_t te_lhs = 0;
  std::int64_t te_rhs = 0;
  std::int64_t cov_lhs = 0;
  std::int64_t cov_rhs = 0;

  bool te_balanced() const noexcept { return te_lhs == te_rhs; }
  bool cov_balanced() const noexcept { return cov_lhs == cov_rhs; }
  bool ok() const noexcept { return te_balanced() && cov_balanced(); }
};

inline IdentityCheck decomposition_identities(const PebbleDistribution& p, AnalysisCache* cache = nullptr) {
  const Graph& g = p.graph();
  IdentityCheck check;
  ReachabilityReport scratch;
  const auto& whole = detail::analyzed(p, cache, scratch);
  check.te_lhs = static_cast<std::int64_t>(whole.total_excess);
  check.cov_lhs = static_cast<std::int64_t>(whole.cov());

  PebbleDistribution partial(g);
  CooperationOptions options;
  options.compute_m = false;
  options.cache = cache;
  for (const auto& u : decompose(p)) {
    const PebbleDistribution unit = u.on(g);
    const auto& ru = detail::analyzed(unit, cache, scratch);
    check.te_rhs += static_cast<std::int64_t>(ru.total_excess);
    check.cov_rhs += static_cast<std::int64_t>(ru.cov());
    const auto coop = cooperation(partial, unit, options);
    check.te_rhs += coop.ce;
    check.cov_rhs += static_cast<std::int64_t>(coop.coop) - static_cast<std::int64_t>(coop.dc);
    partial = sum(partial, unit);
  }
  return check;
}

// C-blocks from a cooperation report. Two vertices are joined by a coopexcess
// path exactly when they are adjacent or both lie in the closed neighborhood
// of one connected component of the positive-cooperation-excess vertices, so
// each C-block is such a closed neighborhood.
inline std::vector<std::vector<Vertex>> c_blocks(const Graph& g, const CooperationReport& report) {
  const std::size_t n = g.order();
  std::vector<int> component(n, -1);
  std::vector<std::vector<Vertex>> blocks;
  for (Vertex s = 0; s < n; ++s) {
    if (!report.has_ce(s) || component[s] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    std::vector<Vertex> inner{s};
    component[s] = id;
    for (std::size_t head = 0; head < inner.size(); ++head) {
      for (Vertex y : g.neighbors(inner[head])) {
        if (report.has_ce(y) && component[y] < 0) {
          component[y] = id;
          inner.push_back(y);
        }
      }
    }
    std::set<Vertex> block(inner.begin(), inner.end());
    for (Vertex x : inner)
      for (Vertex y : g.neighbors(x)) block.insert(y);
    blocks.emplace_back(block.begin(), block.end());
  }
  return blocks;
}

inline std::vector<std::vector<Vertex>> find_c_blocks(const PebbleDistribution& p, const UnitDistribution& u) {
  if (u.count < 2) throw Error(ErrorCode::unit_too_small, "C-blocks need a unit of at least two pebbles");
  CooperationOptions options;
  options.compute_m = false;
  const auto report = cooperation(p, u, options);
  return c_blocks(p.graph(), report);
}

// Digraph of the distinct directed move edges of a sequence.
struct Trajectory {
  std::set<std::pair<Vertex, Vertex>> arcs;

  bool acyclic() const {
    std::set<Vertex> nodes;
    for (auto [a, b] : arcs) {
      nodes.insert(a);
      nodes.insert(b);
    }
    // Kahn's algorithm
    std::map<Vertex, int> indegree;
    for (Vertex v : nodes) indegree[v] = 0;
    for (auto [a, b] : arcs) ++indegree[b];
    std::vector<Vertex> ready;
    for (auto [v, d] : indegree)
      if (d == 0) ready.push_back(v);
    std::size_t removed = 0;
    while (!ready.empty()) {
      const Vertex v = ready.back();
      ready.pop_back();
      ++removed;
      for (auto it = arcs.lower_bound({v, 0}); it != arcs.end() && it->first == v; ++it) {
        if (--indegree[it->second] == 0) ready.push_back(it->second);
      }
    }
    return removed == nodes.size();
  }
};

inline Trajectory trajectory(std::span<const PebblingMove> sequence) {
  Trajectory t;
  for (const auto& m : sequence) t.arcs.emplace(m.from, m.to);
  return t;
}

}  // namespace pebble
