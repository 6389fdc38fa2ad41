#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pebble/errors.hpp"
#include "pebble/graph.hpp"

namespace pebble {

using Count = std::uint32_t;

// Pebble counts over a fixed graph. The graph is referenced, not owned, and
// must outlive every distribution built on it.
class PebbleDistribution {
 public:
  explicit PebbleDistribution(const Graph& g) : graph_(&g), counts_(g.order(), 0) {}

  PebbleDistribution(const Graph& g, std::vector<Count> counts)
      : graph_(&g), counts_(std::move(counts)) {
    if (counts_.size() != g.order()) {
      throw Error(ErrorCode::invalid_size, "counts length " + std::to_string(counts_.size()) +
                                               " for " + std::to_string(g.order()) + " vertices");
    }
    size_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  PebbleDistribution(const Graph& g, std::initializer_list<std::pair<Vertex, Count>> placed)
      : PebbleDistribution(g) {
    for (auto [v, c] : placed) add(v, c);
  }

  const Graph& graph() const noexcept { return *graph_; }
  std::span<const Count> counts() const noexcept { return counts_; }
  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  Count operator[](Vertex v) const { return counts_[v]; }
  Count at(Vertex v) const {
    graph_->check_vertex(v);
    return counts_[v];
  }

  void add(Vertex v, Count k) {
    graph_->check_vertex(v);
    counts_[v] += k;
    size_ += k;
  }

  void set(Vertex v, Count k) {
    graph_->check_vertex(v);
    size_ = size_ - counts_[v] + k;
    counts_[v] = k;
  }

  std::vector<Vertex> support() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < counts_.size(); ++v)
      if (counts_[v] > 0) out.push_back(v);
    return out;
  }

  bool same_graph(const PebbleDistribution& other) const {
    return graph_ == other.graph_ || *graph_ == *other.graph_;
  }

  bool disjoint_with(const PebbleDistribution& other) const {
    for (std::size_t v = 0; v < counts_.size(); ++v)
      if (counts_[v] > 0 && other.counts_[v] > 0) return false;
    return true;
  }

  friend bool operator==(const PebbleDistribution& a, const PebbleDistribution& b) {
    return a.same_graph(b) && a.counts_ == b.counts_;
  }

 private:
  const Graph* graph_;
  std::vector<Count> counts_;
  std::uint64_t size_ = 0;
};

struct PebblingMove {
  Vertex from;
  Vertex to;

  friend bool operator==(const PebblingMove&, const PebblingMove&) = default;
};

// Returns the distribution after the move; the input is left untouched.
inline PebbleDistribution apply_move(const PebbleDistribution& p, PebblingMove m) {
  const Graph& g = p.graph();
  g.check_vertex(m.from);
  g.check_vertex(m.to);
  if (!g.adjacent(m.from, m.to)) {
    throw Error(ErrorCode::non_adjacent,
                std::to_string(m.from) + " and " + std::to_string(m.to) + " are not adjacent");
  }
  if (p[m.from] < 2) {
    throw Error(ErrorCode::insufficient_pebbles,
                "vertex " + std::to_string(m.from) + " holds " + std::to_string(p[m.from]));
  }
  PebbleDistribution next = p;
  next.set(m.from, p[m.from] - 2);
  next.set(m.to, p[m.to] + 1);
  return next;
}

inline PebbleDistribution apply_sequence(PebbleDistribution p, std::span<const PebblingMove> seq) {
  for (const auto& m : seq) p = apply_move(p, m);
  return p;
}

// Text format: one "vertex count" pair per line with count >= 1; blank lines
// and '#' comments are ignored; a vertex may appear once.
inline PebbleDistribution read_distribution(std::istream& in, const Graph& g) {
  PebbleDistribution p(g);
  std::vector<bool> seen(g.order(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    long long v = 0;
    long long c = 0;
    if (!(tokens >> v)) continue;
    std::string extra;
    if (!(tokens >> c) || (tokens >> extra)) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected 'vertex count'");
    }
    if (v < 0 || static_cast<unsigned long long>(v) >= g.order()) {
      throw Error(ErrorCode::vertex_out_of_range, "line " + std::to_string(line_no));
    }
    if (c < 1) throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": count must be >= 1");
    if (seen[v]) throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": vertex repeated");
    seen[v] = true;
    p.set(static_cast<Vertex>(v), static_cast<Count>(c));
  }
  return p;
}

inline void write_distribution(std::ostream& out, const PebbleDistribution& p) {
  for (Vertex v : p.support()) out << v << ' ' << p[v] << '\n';
}

inline std::string to_string(const PebbleDistribution& p) {
  std::string s = "{";
  bool first = true;
  for (Vertex v : p.support()) {
    if (!first) s += ", ";
    s += std::to_string(v) + ":" + std::to_string(p[v]);
    first = false;
  }
  return s + "}";
}

}  // namespace pebble
