#pragma once

// Exact optimal pebbling number by size-ordered enumeration of
// distributions. Each size class is enumerated as count vectors in
// lexicographically decreasing order; with automorphisms supplied, only
// vectors that are lexicographically largest in their orbit are tested.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pebble/bounds.hpp"
#include "pebble/distribution.hpp"
#include "pebble/engine.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"
#include "pebble/parallel.hpp"

namespace pebble {

namespace detail {

// Scaled pebble weights sum_u P(u) 2^-d(u,v), used as a necessary condition
// for reachability. Distances past the scale are rounded up, which keeps the
// test sound.
class WeightFilter {
 public:
  explicit WeightFilter(const Graph& g) : n_(g.order()), table_(g.order() * g.order(), 0) {
    int diam = 0;
    for (Vertex a = 0; a < n_; ++a)
      for (Vertex b = 0; b < n_; ++b) diam = std::max(diam, g.distance(a, b));
    scale_ = std::min(diam, 100);
    for (Vertex a = 0; a < n_; ++a) {
      for (Vertex b = 0; b < n_; ++b) {
        const int d = g.distance(a, b);
        Wide w = 0;
        if (d != kNoPath) w = d <= scale_ ? Wide{1} << (scale_ - d) : 1;
        table_[a * n_ + b] = w;
      }
    }
  }

  bool passes(std::span<const Count> counts) const {
    const Wide one = Wide{1} << scale_;
    for (std::size_t v = 0; v < n_; ++v) {
      Wide total = 0;
      for (std::size_t u = 0; u < n_; ++u)
        if (counts[u]) total += table_[u * n_ + v] * counts[u];
      if (total < one) return false;
    }
    return true;
  }

 private:
  using Wide = unsigned __int128;
  std::size_t n_;
  std::vector<Wide> table_;
  int scale_ = 0;
};

inline bool lex_max_in_orbit(std::span<const Count> c, const std::vector<Permutation>& group) {
  const std::size_t n = c.size();
  thread_local std::vector<Count> image;
  for (const auto& perm : group) {
    image.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) image[perm[v]] = c[v];
    for (std::size_t x = 0; x < n; ++x) {
      if (image[x] == c[x]) continue;
      if (image[x] > c[x]) return false;
      break;
    }
  }
  return true;
}

// Iterates count vectors of total k over n slots in lexicographically
// decreasing order.
class CompositionIterator {
 public:
  CompositionIterator(std::size_t n, Count k) : counts_(n, 0) {
    if (n == 0) {
      done_ = k > 0;
      return;
    }
    counts_[0] = k;
  }

  bool done() const { return done_; }
  std::span<const Count> counts() const { return counts_; }

  void next() {
    const std::size_t n = counts_.size();
    // rightmost position (excluding the last) with a positive count
    std::size_t i = n;
    for (std::size_t j = n - 1; j-- > 0;) {
      if (counts_[j] > 0) {
        i = j;
        break;
      }
    }
    if (i == n) {
      done_ = true;
      return;
    }
    const Count rest = counts_[n - 1];
    counts_[n - 1] = 0;
    counts_[i] -= 1;
    counts_[i + 1] = rest + 1;
  }

 private:
  std::vector<Count> counts_;
  bool done_ = false;
};

}  // namespace detail

struct SolvableOptions {
  SearchStats* stats = nullptr;
  std::uint64_t max_states = 0;
};

// True iff every vertex is reachable. Vertices farthest from the pebbles are
// tested first, so most unsolvable inputs fail on the first query.
inline bool is_solvable(const Graph& g, const PebbleDistribution& p, const SolvableOptions& options = {}) {
  if (!(p.graph() == g)) throw Error(ErrorCode::graph_mismatch, "distribution is on another graph");
  const std::size_t n = g.order();
  if (n == 0) return true;
  std::vector<int> gap(n, std::numeric_limits<int>::max());
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : p.support()) {
      const int d = g.distance(u, v);
      if (d != kNoPath) gap[v] = std::min(gap[v], d);
    }
  }
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return gap[a] > gap[b]; });
  ReachOptions ro;
  ro.stats = options.stats;
  ro.max_states = options.max_states;
  for (Vertex v : order) {
    if (p[v] > 0) continue;
    if (gap[v] == std::numeric_limits<int>::max()) return false;
    if (!k_reachable(p, v, 1, ro)) return false;
  }
  return true;
}

struct SolveOptions {
  // Automorphisms used for orbit reduction; empty means raw enumeration.
  std::vector<Permutation> automorphisms;
  // Caps on candidate distributions tested and on wall-clock seconds; 0 is
  // unlimited.
  std::uint64_t max_nodes = 0;
  double max_seconds = 0;
  unsigned jobs = 1;
  // Start at the best available lower bound instead of 1.
  bool use_bounds = true;
  std::optional<GraphSpec> spec;
  std::size_t max_vertices = 64;
  Count max_pebbles = 64;
};

struct SolveStats {
  std::uint64_t enumerated = 0;       // count vectors generated
  std::uint64_t orbit_skipped = 0;    // not canonical under the automorphisms
  std::uint64_t weight_rejected = 0;  // failed the weight test
  std::uint64_t tested = 0;           // full solvability checks
  std::uint64_t states_expanded = 0;
};

struct SolveResult {
  std::uint64_t pi_opt = 0;
  PebbleDistribution witness;
  std::uint64_t lower_bound_used = 0;
  SolveStats stats;
};

// Lower bound the search starts from: ceil(|V| / max ef), raised by the grid
// bound for tori and grids with both sides at least 5.
inline std::uint64_t starting_bound(const Graph& g, const std::optional<GraphSpec>& spec) {
  auto lower = static_cast<std::uint64_t>(ceil(fractional_bound(g)));
  if (spec && (spec->family == Family::torus || spec->family == Family::grid) && spec->m >= 5 && spec->n >= 5) {
    lower = std::max(lower, grid_bound(spec->m, spec->n));
  }
  return std::max<std::uint64_t>(lower, 1);
}

// A pebble on every vertex always works, as does 2^r pebbles on a center of
// eccentricity r.
inline std::uint64_t trivial_upper_bound(const Graph& g) {
  int radius = std::numeric_limits<int>::max();
  for (Vertex v = 0; v < g.order(); ++v) {
    int ecc = 0;
    for (Vertex w = 0; w < g.order(); ++w) ecc = std::max(ecc, g.distance(v, w));
    radius = std::min(radius, ecc);
  }
  std::uint64_t upper = g.order();
  if (radius < 63) upper = std::min<std::uint64_t>(upper, std::uint64_t{1} << radius);
  return upper;
}

inline SolveResult solve(const Graph& g, const SolveOptions& options = {}) {
  if (g.order() == 0 || !g.connected()) throw Error(ErrorCode::disconnected_graph, "solve needs a connected graph");
  if (g.order() > options.max_vertices) {
    throw Error(ErrorCode::invalid_size, "graph has more than " + std::to_string(options.max_vertices) + " vertices");
  }
  for (const auto& perm : options.automorphisms) {
    if (!is_automorphism(g, perm)) throw Error(ErrorCode::invalid_size, "supplied permutation is not an automorphism");
  }
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = g.order();
  const std::uint64_t upper = trivial_upper_bound(g);
  SolveResult result{0, PebbleDistribution(g), 0, {}};
  result.lower_bound_used = options.use_bounds ? starting_bound(g, options.spec) : 1;
  const detail::WeightFilter filter(g);

  constexpr std::size_t kChunk = 2048;
  std::vector<std::vector<Count>> chunk;
  std::vector<std::uint8_t> ok;
  std::vector<SearchStats> stats;

  auto over_budget = [&] {
    if (options.max_nodes && result.stats.tested >= options.max_nodes) return true;
    if (options.max_seconds > 0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - started;
      if (spent.count() > options.max_seconds) return true;
    }
    return false;
  };

  for (std::uint64_t k = result.lower_bound_used;; ++k) {
    if (k > options.max_pebbles) {
      throw BudgetExceeded(k, upper, "pebble cap reached");
    }
    auto flush = [&]() -> bool {
      if (chunk.empty()) return false;
      ok.assign(chunk.size(), 0);
      stats.assign(chunk.size(), {});
      parallel_for(chunk.size(), options.jobs, [&](std::size_t i) {
        SolvableOptions so;
        so.stats = &stats[i];
        ok[i] = is_solvable(g, PebbleDistribution(g, chunk[i]), so) ? 1 : 0;
      });
      result.stats.tested += chunk.size();
      for (const auto& s : stats) result.stats.states_expanded += s.states_expanded;
      for (std::size_t i = 0; i < chunk.size(); ++i) {
        if (ok[i]) {
          result.pi_opt = k;
          result.witness = PebbleDistribution(g, chunk[i]);
          return true;
        }
      }
      chunk.clear();
      return false;
    };

    for (detail::CompositionIterator it(n, static_cast<Count>(k)); !it.done(); it.next()) {
      ++result.stats.enumerated;
      const auto c = it.counts();
      if (!options.automorphisms.empty() && !detail::lex_max_in_orbit(c, options.automorphisms)) {
        ++result.stats.orbit_skipped;
        continue;
      }
      if (!filter.passes(c)) {
        ++result.stats.weight_rejected;
        continue;
      }
      chunk.emplace_back(c.begin(), c.end());
      if (chunk.size() == kChunk) {
        if (flush()) return result;
        if (over_budget()) throw BudgetExceeded(k, upper, "solver budget exhausted");
      }
    }
    if (flush()) return result;
    if (k >= upper) {
      // cannot happen for a connected graph: the all-ones vector is solvable
      throw Error(ErrorCode::not_solvable, "no solvable distribution up to the trivial upper bound");
    }
    if (over_budget()) throw BudgetExceeded(k + 1, upper, "solver budget exhausted");
  }
}

}  // namespace pebble
