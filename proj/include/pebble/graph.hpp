#pragma once

// Immutable undirected simple graphs with eagerly computed all-pairs
// distances, plus the generators used throughout the toolkit.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pebble/errors.hpp"

namespace pebble {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr int kNoPath = -1;

class Graph {
 public:
  Graph() = default;

  // Edges are unordered; duplicates in either orientation are rejected, as are
  // self-loops.
  Graph(std::size_t order, std::span<const Edge> edges) : adjacency_(order) {
    edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
      if (a >= order || b >= order) {
        throw Error(ErrorCode::vertex_out_of_range,
                    "edge {" + std::to_string(a) + "," + std::to_string(b) + "} on " +
                        std::to_string(order) + " vertices");
      }
      if (a == b) throw Error(ErrorCode::invalid_edge, "self-loop at " + std::to_string(a));
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw Error(ErrorCode::invalid_edge, "parallel edge");
    }
    for (auto [a, b] : edges_) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& nb : adjacency_) {
      std::sort(nb.begin(), nb.end());
      max_degree_ = std::max(max_degree_, nb.size());
    }
    compute_distances();
  }

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const std::vector<Vertex>& neighbors(Vertex v) const {
    check_vertex(v);
    return adjacency_[v];
  }

  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }

  bool adjacent(Vertex a, Vertex b) const {
    const auto& nb = neighbors(a);
    check_vertex(b);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  // Edge count of a shortest path, or kNoPath across components.
  int distance(Vertex a, Vertex b) const {
    check_vertex(a);
    check_vertex(b);
    return dist_[static_cast<std::size_t>(a) * order() + b];
  }

  // Maximum finite distance. For disconnected graphs this is the largest
  // component diameter.
  int diameter() const noexcept { return diameter_; }
  bool connected() const noexcept { return connected_; }

  // N_k(v): vertices at distance exactly k.
  std::vector<Vertex> neighborhood(Vertex v, int k) const {
    check_vertex(v);
    std::vector<Vertex> out;
    if (k < 0) return out;
    for (Vertex u = 0; u < order(); ++u) {
      if (distance(v, u) == k) out.push_back(u);
    }
    return out;
  }

  // |N_0(v)|, |N_1(v)|, ... up to the eccentricity of v.
  std::vector<std::size_t> layer_sizes(Vertex v) const {
    check_vertex(v);
    std::vector<std::size_t> layers;
    for (Vertex u = 0; u < order(); ++u) {
      const int d = distance(v, u);
      if (d == kNoPath) continue;
      if (layers.size() <= static_cast<std::size_t>(d)) layers.resize(d + 1, 0);
      ++layers[d];
    }
    return layers;
  }

  std::vector<std::size_t> degree_sequence() const {
    std::vector<std::size_t> seq;
    seq.reserve(order());
    for (const auto& nb : adjacency_) seq.push_back(nb.size());
    std::sort(seq.begin(), seq.end());
    return seq;
  }

  void check_vertex(Vertex v) const {
    if (v >= order()) {
      throw Error(ErrorCode::vertex_out_of_range,
                  "vertex " + std::to_string(v) + " on " + std::to_string(order()) + " vertices");
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.order() == b.order() && a.edges_ == b.edges_;
  }

 private:
  void compute_distances() {
    const std::size_t n = order();
    dist_.assign(n * n, kNoPath);
    connected_ = true;
    std::vector<Vertex> queue;
    queue.reserve(n);
    for (Vertex s = 0; s < n; ++s) {
      int* row = dist_.data() + static_cast<std::size_t>(s) * n;
      row[s] = 0;
      queue.clear();
      queue.push_back(s);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        for (Vertex y : adjacency_[x]) {
          if (row[y] == kNoPath) {
            row[y] = row[x] + 1;
            diameter_ = std::max(diameter_, row[y]);
            queue.push_back(y);
          }
        }
      }
      if (queue.size() != n) connected_ = false;
    }
  }

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<int> dist_;
  std::size_t max_degree_ = 0;
  int diameter_ = 0;
  bool connected_ = true;
};

// ---------------------------------------------------------------------------
// Generators

inline Graph make_path(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_size, "path needs at least one vertex");
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

inline Graph make_cycle(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::invalid_size, "cycle needs at least three vertices");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph(n, edges);
}

inline Graph make_complete(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_size, "complete graph needs a vertex");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

// Vertex (i, j) of g□h is encoded as i * |V(h)| + j.
inline Vertex product_vertex(const Graph& h, Vertex i, Vertex j) {
  return static_cast<Vertex>(i * h.order() + j);
}

inline Graph cartesian_product(const Graph& g, const Graph& h) {
  if (g.order() == 0 || h.order() == 0) {
    throw Error(ErrorCode::invalid_size, "cartesian product of an empty graph");
  }
  std::vector<Edge> edges;
  edges.reserve(g.size() * h.order() + h.size() * g.order());
  for (auto [a, b] : g.edges())
    for (Vertex j = 0; j < h.order(); ++j)
      edges.emplace_back(product_vertex(h, a, j), product_vertex(h, b, j));
  for (auto [a, b] : h.edges())
    for (Vertex i = 0; i < g.order(); ++i)
      edges.emplace_back(product_vertex(h, i, a), product_vertex(h, i, b));
  return Graph(g.order() * h.order(), edges);
}

inline Graph make_grid(std::size_t m, std::size_t n) {
  return cartesian_product(make_path(m), make_path(n));
}

// T_{m,n} = C_m □ C_n.
inline Graph make_torus(std::size_t m, std::size_t n) {
  return cartesian_product(make_cycle(m), make_cycle(n));
}

// ---------------------------------------------------------------------------
// Generator spec strings: "path:n", "cycle:n", "grid:m,n", "torus:m,n",
// "complete:n".

enum class Family { path, cycle, grid, torus, complete, file };

struct GraphSpec {
  Family family = Family::file;
  std::size_t m = 0;
  std::size_t n = 0;
};

inline std::optional<GraphSpec> parse_graph_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string name = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  auto parse_number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::parse_error, "bad size '" + s + "' in graph spec '" + text + "'");
    }
    return std::stoull(s);
  };
  GraphSpec spec;
  if (name == "path" || name == "cycle" || name == "complete") {
    spec.family = name == "path" ? Family::path : name == "cycle" ? Family::cycle : Family::complete;
    spec.n = parse_number(args);
    return spec;
  }
  if (name == "grid" || name == "torus") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::parse_error, "expected m,n in graph spec '" + text + "'");
    }
    spec.family = name == "grid" ? Family::grid : Family::torus;
    spec.m = parse_number(args.substr(0, comma));
    spec.n = parse_number(args.substr(comma + 1));
    return spec;
  }
  throw Error(ErrorCode::parse_error, "unknown graph family '" + name + "'");
}

inline Graph build(const GraphSpec& spec) {
  switch (spec.family) {
    case Family::path: return make_path(spec.n);
    case Family::cycle: return make_cycle(spec.n);
    case Family::complete: return make_complete(spec.n);
    case Family::grid: return make_grid(spec.m, spec.n);
    case Family::torus: return make_torus(spec.m, spec.n);
    case Family::file: break;
  }
  throw Error(ErrorCode::parse_error, "file graphs have no generator");
}

// Text format: "n m" then m lines "u v"; blank lines and '#' comments ignored.
inline Graph read_graph(std::istream& in) {
  std::vector<long long> numbers;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      try {
        std::size_t used = 0;
        numbers.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, "non-integer token '" + tok + "' in graph text");
      }
    }
  }
  if (numbers.size() < 2) throw Error(ErrorCode::parse_error, "missing 'n m' header");
  if (numbers[0] < 0 || numbers[1] < 0) throw Error(ErrorCode::parse_error, "negative header");
  const auto n = static_cast<std::size_t>(numbers[0]);
  const auto m = static_cast<std::size_t>(numbers[1]);
  if (numbers.size() != 2 + 2 * m) {
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(m) + " edge lines");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i) {
    const long long a = numbers[2 + 2 * i];
    const long long b = numbers[3 + 2 * i];
    if (a < 0 || b < 0) throw Error(ErrorCode::vertex_out_of_range, "negative endpoint");
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return Graph(n, edges);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.order() << ' ' << g.size() << '\n';
  for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

// ---------------------------------------------------------------------------
// Symmetry. Permutations map vertex v to perm[v].

using Permutation = std::vector<Vertex>;

inline bool is_automorphism(const Graph& g, const Permutation& perm) {
  if (perm.size() != g.order()) return false;
  std::vector<bool> seen(g.order(), false);
  for (Vertex x : perm) {
    if (x >= g.order() || seen[x]) return false;
    seen[x] = true;
  }
  for (auto [a, b] : g.edges()) {
    if (!g.adjacent(perm[a], perm[b])) return false;
  }
  return true;
}

namespace detail {

inline std::vector<Permutation> reflections(std::size_t n) {
  Permutation id(n), flip(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = static_cast<Vertex>(i);
    flip[i] = static_cast<Vertex>(n - 1 - i);
  }
  if (id == flip) return {id};
  return {id, flip};
}

inline std::vector<Permutation> dihedral(std::size_t n) {
  std::vector<Permutation> group;
  for (std::size_t s = 0; s < n; ++s) {
    Permutation rot(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
      rot[i] = static_cast<Vertex>((i + s) % n);
      ref[i] = static_cast<Vertex>((s + n - i) % n);
    }
    group.push_back(std::move(rot));
    group.push_back(std::move(ref));
  }
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  return group;
}

inline std::vector<Permutation> product_group(const std::vector<Permutation>& gm,
                                              const std::vector<Permutation>& gn,
                                              std::size_t m, std::size_t n, bool transpose) {
  std::vector<Permutation> group;
  for (const auto& a : gm) {
    for (const auto& b : gn) {
      Permutation p(m * n);
      for (Vertex i = 0; i < m; ++i)
        for (Vertex j = 0; j < n; ++j) p[i * n + j] = static_cast<Vertex>(a[i] * n + b[j]);
      if (transpose) {
        Permutation t(m * n);
        for (Vertex i = 0; i < m; ++i)
          for (Vertex j = 0; j < n; ++j) t[i * n + j] = p[j * n + i];
        group.push_back(std::move(t));
      }
      group.push_back(std::move(p));
    }
  }
  return group;
}

}  // namespace detail

// Known automorphisms of the generator families: reflections of paths,
// dihedral groups of cycles, products of those for grids and tori (with the
// coordinate swap when m == n). File graphs get the identity only.
inline std::vector<Permutation> known_automorphisms(const GraphSpec& spec, std::size_t order) {
  switch (spec.family) {
    case Family::path: return detail::reflections(spec.n);
    case Family::cycle: return detail::dihedral(spec.n);
    case Family::grid:
    case Family::torus: {
      const bool torus = spec.family == Family::torus;
      auto gm = torus ? detail::dihedral(spec.m) : detail::reflections(spec.m);
      auto gn = torus ? detail::dihedral(spec.n) : detail::reflections(spec.n);
      return detail::product_group(gm, gn, spec.m, spec.n, spec.m == spec.n);
    }
    case Family::complete: {
      // A dihedral subgroup of the full symmetric group; enough to cut most
      // duplicate placements.
      if (spec.n < 3) return detail::reflections(spec.n);
      return detail::dihedral(spec.n);
    }
    case Family::file: break;
  }
  Permutation id(order);
  std::iota(id.begin(), id.end(), Vertex{0});
  return {id};
}

// Cheap necessary condition for vertex-transitivity: equal degrees and equal
// distance-layer profiles at every vertex.
inline bool looks_vertex_transitive(const Graph& g) {
  if (g.order() == 0) return true;
  const auto reference = g.layer_sizes(0);
  for (Vertex v = 1; v < g.order(); ++v) {
    if (g.layer_sizes(v) != reference) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Small-graph enumeration

namespace detail {

inline std::uint64_t edge_bit(std::size_t n, Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  // index of (a,b) in row-major upper triangle
  const std::size_t idx = a * n - a * (a + 1) / 2 + (b - a - 1);
  return std::uint64_t{1} << idx;
}

// Canonical form: the minimum edge mask over all vertex relabelings.
inline std::uint64_t canonical_mask(std::size_t n, std::uint64_t mask,
                                    const std::vector<std::vector<std::uint64_t>>& bit_images) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  const std::size_t bits = n * (n - 1) / 2;
  for (const auto& images : bit_images) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < bits; ++i)
      if (mask >> i & 1U) out |= images[i];
    best = std::min(best, out);
  }
  return best;
}

inline Graph graph_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (mask & edge_bit(n, a, b)) edges.emplace_back(a, b);
  return Graph(n, edges);
}

}  // namespace detail

// All graphs on exactly n vertices up to isomorphism (n <= 7), built by
// extending each class on n-1 vertices with a new vertex and deduplicating on
// canonical edge masks.
inline std::vector<Graph> enumerate_graphs(std::size_t n) {
  if (n > 7) throw Error(ErrorCode::invalid_size, "graph enumeration is limited to 7 vertices");
  if (n == 0) return {};
  std::vector<std::uint64_t> classes{0};  // the single vertex
  for (std::size_t k = 2; k <= n; ++k) {
    Permutation perm(k);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    const std::size_t bits = k * (k - 1) / 2;
    std::vector<std::vector<std::uint64_t>> bit_images;
    do {
      std::vector<std::uint64_t> images(bits);
      for (Vertex a = 0; a < k; ++a)
        for (Vertex b = a + 1; b < k; ++b) {
          const auto from = detail::edge_bit(k, a, b);
          images[static_cast<std::size_t>(std::countr_zero(from))] = detail::edge_bit(k, perm[a], perm[b]);
        }
      bit_images.push_back(std::move(images));
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::uint64_t> next;
    for (std::uint64_t base : classes) {
      // re-index the (k-1)-vertex mask into the k-vertex triangle
      std::uint64_t lifted = 0;
      for (Vertex a = 0; a + 1 < k; ++a)
        for (Vertex b = a + 1; b + 1 < k; ++b)
          if (base & detail::edge_bit(k - 1, a, b)) lifted |= detail::edge_bit(k, a, b);
      for (std::uint64_t nb = 0; nb < (std::uint64_t{1} << (k - 1)); ++nb) {
        std::uint64_t mask = lifted;
        for (Vertex a = 0; a + 1 < k; ++a)
          if (nb >> a & 1U) mask |= detail::edge_bit(k, a, static_cast<Vertex>(k - 1));
        next.push_back(detail::canonical_mask(k, mask, bit_images));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    classes = std::move(next);
  }
  std::vector<Graph> out;
  out.reserve(classes.size());
  for (auto mask : classes) out.push_back(detail::graph_from_mask(n, mask));
  return out;
}

inline std::vector<Graph> enumerate_connected_graphs(std::size_t n) {
  auto all = enumerate_graphs(n);
  std::erase_if(all, [](const Graph& g) { return !g.connected(); });
  return all;
}

// Connected G(n, p) sample: retries until connected. `rng` is any
// UniformRandomBitGenerator.
template <class Rng>
Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::invalid_size, "random graph needs a vertex");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (coin(rng) < p) edges.emplace_back(a, b);
    Graph g(n, edges);
    if (g.connected()) return g;
  }
}

}  // namespace pebble
