#pragma once

// Exact reachability: reach(P, v), reach of vertex sets, and the per-vertex
// report (excess, coverage, total excess, solvability).
//
// The search is a depth-first walk over distribution states. Every move
// removes one pebble, so depth is bounded by |P|. Each state is expanded at
// most once per query, and a branch is cut as soon as its pebble weight
//   W(S) = sum_u S(u) * 2^-d(u, targets)
// cannot beat the incumbent. Moves never increase W, and the pebbles on the
// targets never exceed W, so the bound is admissible.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pebble/distribution.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"
#include "pebble/parallel.hpp"

namespace pebble {

struct SearchStats {
  std::uint64_t states_expanded = 0;
};

struct ReachOptions {
  // Vertices no move may touch (neither source nor destination).
  const std::vector<bool>* blocked = nullptr;
  // Stop as soon as this many pebbles are on the targets.
  Count stop_at = std::numeric_limits<Count>::max();
  // 0 means unlimited.
  std::uint64_t max_states = 0;
  SearchStats* stats = nullptr;
};

namespace detail {

class TargetSearch {
 public:
  TargetSearch(const Graph& g, std::span<const Vertex> targets, const ReachOptions& options)
      : graph_(g), options_(options), is_target_(g.order(), false), dist_(g.order(), kNoPath),
        weight_(g.order(), 0) {
    const std::vector<bool>* blocked = options_.blocked;
    auto is_blocked = [&](Vertex v) { return blocked && (*blocked)[v]; };

    std::vector<Vertex> queue;
    for (Vertex t : targets) {
      g.check_vertex(t);
      is_target_[t] = true;
      if (!is_blocked(t) && dist_[t] == kNoPath) {
        dist_[t] = 0;
        queue.push_back(t);
      }
    }
    // Distances through unblocked vertices only.
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex x = queue[head];
      for (Vertex y : g.neighbors(x)) {
        if (dist_[y] == kNoPath && !is_blocked(y)) {
          dist_[y] = dist_[x] + 1;
          queue.push_back(y);
        }
      }
    }
    int far = 0;
    for (int d : dist_) far = std::max(far, d);
    scale_exp_ = std::min(far, kMaxScaleExp);
    for (Vertex v = 0; v < g.order(); ++v) {
      if (is_target_[v]) {
        weight_[v] = Wide{1} << scale_exp_;
      } else if (dist_[v] == kNoPath) {
        weight_[v] = 0;
      } else if (dist_[v] <= scale_exp_) {
        weight_[v] = Wide{1} << (scale_exp_ - dist_[v]);
      } else {
        weight_[v] = 1;  // rounded up, stays admissible
      }
    }
    // Candidate moves per source vertex, closest destinations first.
    moves_from_.resize(g.order());
    for (Vertex a = 0; a < g.order(); ++a) {
      if (is_blocked(a) || dist_[a] == kNoPath) continue;
      for (Vertex b : g.neighbors(a)) {
        if (is_blocked(b) || dist_[b] == kNoPath) continue;
        moves_from_[a].push_back(b);
      }
      std::stable_sort(moves_from_[a].begin(), moves_from_[a].end(),
                       [&](Vertex x, Vertex y) { return dist_[x] < dist_[y]; });
    }
    source_order_.resize(g.order());
    for (Vertex v = 0; v < g.order(); ++v) source_order_[v] = v;
    std::stable_sort(source_order_.begin(), source_order_.end(),
                     [&](Vertex x, Vertex y) { return dist_[x] < dist_[y]; });
  }

  Count run(std::span<const Count> counts) {
    state_.assign(counts.size(), 0);
    Wide weight = 0;
    Count value = 0;
    for (std::size_t v = 0; v < counts.size(); ++v) {
      if (counts[v] > std::numeric_limits<char16_t>::max()) {
        throw Error(ErrorCode::invalid_size, "pebble count above 65535 at one vertex");
      }
      state_[v] = static_cast<char16_t>(counts[v]);
      weight += weight_[v] * counts[v];
      if (is_target_[v]) value += counts[v];
    }
    best_ = value;
    ceiling_ = static_cast<Count>(weight >> scale_exp_);
    if (best_ < ceiling_ && best_ < options_.stop_at) search(weight, value);
    return best_;
  }

 private:
  using Wide = unsigned __int128;
  static constexpr int kMaxScaleExp = 100;

  bool done() const { return best_ >= ceiling_ || best_ >= options_.stop_at; }

  void search(Wide weight, Count value) {
    if (static_cast<Count>(weight >> scale_exp_) <= best_) return;
    if (!visited_.insert(state_).second) return;
    if (options_.stats) ++options_.stats->states_expanded;
    if (options_.max_states && visited_.size() > options_.max_states) {
      throw Error(ErrorCode::budget_exceeded, "reachability search exceeded its state budget");
    }
    for (Vertex a : source_order_) {
      if (state_[a] < 2) continue;
      for (Vertex b : moves_from_[a]) {
        state_[a] -= 2;
        state_[b] += 1;
        const Wide next_weight = weight - 2 * weight_[a] + weight_[b];
        const Count next_value = value - (is_target_[a] ? 2 : 0) + (is_target_[b] ? 1 : 0);
        if (next_value > best_) best_ = next_value;
        if (!done()) search(next_weight, next_value);
        state_[a] += 2;
        state_[b] -= 1;
        if (done()) return;
      }
    }
  }

  const Graph& graph_;
  ReachOptions options_;
  std::vector<bool> is_target_;
  std::vector<int> dist_;
  std::vector<Wide> weight_;
  std::vector<std::vector<Vertex>> moves_from_;
  std::vector<Vertex> source_order_;
  int scale_exp_ = 0;

  std::u16string state_;
  std::unordered_set<std::u16string> visited_;
  Count best_ = 0;
  Count ceiling_ = 0;
};

}  // namespace detail

// Largest number of pebbles any pebbling sequence can leave on v.
inline Count reach(const PebbleDistribution& p, Vertex v, const ReachOptions& options = {}) {
  const Vertex targets[] = {v};
  detail::TargetSearch search(p.graph(), targets, options);
  return search.run(p.counts());
}

// Largest total any pebbling sequence can leave on the vertex set s.
inline Count reach_set(const PebbleDistribution& p, std::span<const Vertex> s,
                       const ReachOptions& options = {}) {
  if (s.empty()) throw Error(ErrorCode::empty_set, "reach_set needs a nonempty target set");
  detail::TargetSearch search(p.graph(), s, options);
  return search.run(p.counts());
}

inline bool k_reachable(const PebbleDistribution& p, Vertex v, Count k, ReachOptions options = {}) {
  options.stop_at = k;
  return reach(p, v, options) >= k;
}

struct ReachabilityReport {
  std::vector<Count> reach;
  std::vector<Count> excess;
  std::vector<Vertex> coverage;
  std::uint64_t total_excess = 0;
  bool solvable = false;

  std::size_t cov() const noexcept { return coverage.size(); }
  bool covered(Vertex v) const { return reach[v] >= 1; }
};

struct AnalyzeOptions {
  unsigned jobs = 1;
  ReachOptions reach;
};

inline ReachabilityReport report_from_reach(std::vector<Count> reach_values) {
  ReachabilityReport r;
  r.reach = std::move(reach_values);
  r.excess.resize(r.reach.size());
  for (Vertex v = 0; v < r.reach.size(); ++v) {
    r.excess[v] = r.reach[v] >= 1 ? r.reach[v] - 1 : 0;
    r.total_excess += r.excess[v];
    if (r.reach[v] >= 1) r.coverage.push_back(v);
  }
  r.solvable = r.coverage.size() == r.reach.size();
  return r;
}

// Per-vertex reach, excess, coverage and total excess. Vertices may be
// evaluated on several workers, each with its own memo table.
inline ReachabilityReport analyze(const PebbleDistribution& p, const AnalyzeOptions& options = {}) {
  const std::size_t n = p.graph().order();
  std::vector<Count> values(n, 0);
  std::vector<SearchStats> stats(n);
  parallel_for(n, options.jobs, [&](std::size_t v) {
    ReachOptions ro = options.reach;
    ro.stats = options.reach.stats ? &stats[v] : nullptr;
    values[v] = reach(p, static_cast<Vertex>(v), ro);
  });
  if (options.reach.stats) {
    for (const auto& s : stats) options.reach.stats->states_expanded += s.states_expanded;
  }
  return report_from_reach(std::move(values));
}

// Memoizes analyze() by counts vector for repeated queries over one graph.
// Not thread-safe; give each worker its own cache.
class AnalysisCache {
 public:
  const ReachabilityReport& get(const PebbleDistribution& p) {
    key_.assign(p.counts().begin(), p.counts().end());
    auto it = cache_.find(key_);
    if (it == cache_.end()) it = cache_.emplace(key_, analyze(p)).first;
    return it->second;
  }

  std::size_t size() const noexcept { return cache_.size(); }
  void clear() { cache_.clear(); }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<Count>& v) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (Count c : v) h = (h ^ c) * 1099511628211ULL;
      return h;
    }
  };
  std::vector<Count> key_;
  std::unordered_map<std::vector<Count>, ReachabilityReport, Hash> cache_;
};

}  // namespace pebble
