#pragma once

// Closed-form quantities and lower bounds on the optimal pebbling number,
// plus export of the integer program in CPLEX LP format.
//
// All arithmetic is exact; ceilings are taken only when an integer is
// reported.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pebble/decomposition.hpp"
#include "pebble/engine.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"

namespace pebble {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt ceil(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);  // always positive
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q;
}

inline std::string to_string(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline void require_connected(const Graph& g) {
  if (g.order() == 0 || !g.connected()) {
    throw Error(ErrorCode::disconnected_graph, "bounds need a connected, nonempty graph");
  }
}

}  // namespace detail

// ef(v) = sum_i |N_i(v)| / 2^i
inline Rational effect(const Graph& g, Vertex v) {
  detail::require_connected(g);
  g.check_vertex(v);
  Rational total = 0;
  BigInt scale = 1;
  for (std::size_t layer : g.layer_sizes(v)) {
    total += Rational(BigInt(layer), scale);
    scale *= 2;
  }
  return total;
}

inline std::vector<Rational> effects(const Graph& g) {
  std::vector<Rational> out;
  out.reserve(g.order());
  for (Vertex v = 0; v < g.order(); ++v) out.push_back(effect(g, v));
  return out;
}

inline Rational max_effect(const Graph& g) {
  const auto all = effects(g);
  return *std::max_element(all.begin(), all.end());
}

struct ExcessCheck {
  Rational lhs;  // sum ef(v) P(v)
  Rational rhs;  // |V| + TE(P)
  Rational slack() const { return lhs - rhs; }
  bool holds() const { return lhs >= rhs; }
};

// Both sides of the excess inequality for a solvable P. `ef` holds ef(v) for
// every vertex and `report` is the analysis of P.
inline ExcessCheck excess_inequality_check(const std::vector<Rational>& ef, const PebbleDistribution& p,
                                           const ReachabilityReport& report) {
  if (!report.solvable) throw Error(ErrorCode::not_solvable, "distribution is not solvable");
  ExcessCheck check;
  for (Vertex v = 0; v < p.graph().order(); ++v)
    if (p[v] > 0) check.lhs += ef[v] * p[v];
  check.rhs = Rational(p.graph().order()) + Rational(report.total_excess);
  return check;
}

inline ExcessCheck excess_inequality_check(const Graph& g, const PebbleDistribution& p) {
  if (!(p.graph() == g)) throw Error(ErrorCode::graph_mismatch, "distribution is on another graph");
  return excess_inequality_check(effects(g), p, analyze(p));
}

// |V| / ef(v). On graphs that are not vertex-transitive the largest effect is
// used, which keeps the value a valid lower bound.
inline Rational fractional_bound(const Graph& g) {
  return Rational(g.order()) / max_effect(g);
}

// (|V| + TE(P)) / ef(v): a lower bound on |P| for a solvable P.
inline Rational excess_bound(const Graph& g, const PebbleDistribution& p) {
  const auto report = analyze(p);
  if (!report.solvable) throw Error(ErrorCode::not_solvable, "distribution is not solvable");
  return (Rational(g.order()) + Rational(report.total_excess)) / max_effect(g);
}

// ((D-1)/(D-2)|V| + UE(P) - sum cov(U_i)/(D-2)) / ef(v), for solvable P and
// maximum degree D >= 3.
inline Rational structural_bound(const Graph& g, const PebbleDistribution& p, AnalysisCache* cache = nullptr) {
  detail::require_connected(g);
  const std::size_t delta = g.max_degree();
  if (delta < 3) throw Error(ErrorCode::delta_too_small, "structural bound needs maximum degree >= 3");
  ReachabilityReport scratch;
  if (!detail::analyzed(p, cache, scratch).solvable) {
    throw Error(ErrorCode::not_solvable, "distribution is not solvable");
  }
  std::int64_t ue = 0;
  std::int64_t cov_sum = 0;
  for (const auto& u : decompose(p)) {
    const auto& r = detail::analyzed(u.on(g), cache, scratch);
    ue += static_cast<std::int64_t>(r.total_excess);
    cov_sum += static_cast<std::int64_t>(r.cov());
  }
  const Rational d(static_cast<std::int64_t>(delta));
  const Rational n(static_cast<std::int64_t>(g.order()));
  return ((d - 1) / (d - 2) * n + Rational(ue) - Rational(cov_sum) / (d - 2)) / max_effect(g);
}

// ceil(2mn / 13) for tori and grids with both sides at least 5.
inline std::uint64_t grid_bound(std::uint64_t m, std::uint64_t n) {
  if (m < 5 || n < 5) throw Error(ErrorCode::too_small, "grid bound needs m, n >= 5");
  return (2 * m * n + 12) / 13;
}

struct UnitEstimate {
  Rational cov_cap;
  Rational exc_floor;
};

// Coverage cap and total-excess floor for a unit of the given size on a
// torus with both sides at least 5.
inline UnitEstimate unit_estimates(std::size_t m, std::size_t n, Count size) {
  if (m < 5 || n < 5) throw Error(ErrorCode::graph_too_small, "unit estimates need a torus with m, n >= 5");
  if (size == 0) throw Error(ErrorCode::invalid_size, "empty unit");
  const Rational s(size);
  if (size == 1) return {Rational(1), Rational(0)};
  if (size <= 3) return {Rational(5, 2) * s, Rational(1, 2) * s};
  return {Rational(13, 4) * s, Rational(8, 5) * s};
}

// ceil(2n/3), the optimal pebbling number of P_n and C_n.
inline std::uint64_t path_cycle_bound(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_size, "path length must be positive");
  return (2 * n + 2) / 3;
}

// ---------------------------------------------------------------------------
// Reports

struct BoundReport {
  std::string graph_id;
  std::size_t order = 0;
  std::size_t max_degree = 0;
  // distinct effect values with one representative vertex each
  std::vector<std::pair<Vertex, Rational>> effect;
  Rational fractional_bound;
  std::optional<Rational> excess_bound;
  std::optional<Rational> structural_bound;
  std::optional<std::uint64_t> grid_bound;
  std::optional<std::uint64_t> path_cycle_value;
  std::vector<std::string> notes;

  // Best integer lower bound on the optimal pebbling number among the
  // graph-level bounds (the distribution-level ones bound |P| instead).
  std::uint64_t best_graph_bound() const {
    auto best = static_cast<std::uint64_t>(ceil(fractional_bound));
    if (grid_bound) best = std::max(best, *grid_bound);
    return best;
  }
};

inline BoundReport bound_report(const Graph& g, const std::string& graph_id,
                                const std::optional<GraphSpec>& spec = std::nullopt,
                                const PebbleDistribution* p = nullptr) {
  detail::require_connected(g);
  BoundReport r;
  r.graph_id = graph_id;
  r.order = g.order();
  r.max_degree = g.max_degree();
  for (Vertex v = 0; v < g.order(); ++v) {
    Rational e = effect(g, v);
    const bool seen = std::any_of(r.effect.begin(), r.effect.end(), [&](const auto& x) { return x.second == e; });
    if (!seen) r.effect.emplace_back(v, std::move(e));
  }
  const bool transitive = looks_vertex_transitive(g);
  if (!transitive) r.notes.push_back("not vertex-transitive: bounds use the largest effect");
  r.fractional_bound = fractional_bound(g);
  if (spec && (spec->family == Family::torus || spec->family == Family::grid)) {
    if (spec->m >= 5 && spec->n >= 5) {
      r.grid_bound = grid_bound(spec->m, spec->n);
    } else {
      r.notes.push_back("grid bound needs m, n >= 5");
    }
  }
  if (spec && (spec->family == Family::path || spec->family == Family::cycle)) {
    r.path_cycle_value = path_cycle_bound(spec->n);
  }
  if (p) {
    const auto report = analyze(*p);
    if (!report.solvable) {
      r.notes.push_back("distribution is not solvable: distribution bounds skipped");
    } else {
      r.excess_bound = excess_bound(g, *p);
      if (g.max_degree() >= 3) {
        r.structural_bound = structural_bound(g, *p);
      } else {
        r.notes.push_back("structural bound needs maximum degree >= 3");
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Integer program export
//
// Variables P_i (pebbles placed on vertex i) and p_i_j_k (moves from j to k
// made while serving target i). For each target i:
//   t_i:    P_i + sum_x (p_i_x_i - 2 p_i_i_x) >= 1
//   m_i_j:  P_j + sum_x (p_i_x_j - 2 p_i_j_x) >= 0    for every j
// The objective minimizes the sum of the P_i.

struct IlpSummary {
  std::size_t placement_variables = 0;
  std::size_t flow_variables = 0;
  std::size_t target_constraints = 0;
  std::size_t intermediate_constraints = 0;
  bool integral = true;

  std::size_t variables() const { return placement_variables + flow_variables; }
  std::size_t constraints() const { return target_constraints + intermediate_constraints; }
};

namespace detail {

// Writes space-separated terms, wrapping long rows.
class LpRow {
 public:
  explicit LpRow(std::ostream& out) : out_(out) {}
  void term(const std::string& t) {
    if (count_ > 0 && count_ % 8 == 0) out_ << "\n   ";
    out_ << ' ' << t;
    ++count_;
  }

 private:
  std::ostream& out_;
  std::size_t count_ = 0;
};

inline std::string flow(Vertex i, Vertex j, Vertex k) {
  return "p_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

inline void balance_row(std::ostream& out, const Graph& g, Vertex i, Vertex j) {
  LpRow row(out);
  row.term("P_" + std::to_string(j));
  for (Vertex x : g.neighbors(j)) {
    row.term("+ " + flow(i, x, j));
    row.term("- 2 " + flow(i, j, x));
  }
}

}  // namespace detail

inline IlpSummary emit_ilp(const Graph& g, std::ostream& out, bool relax = false) {
  const std::size_t n = g.order();
  IlpSummary s;
  s.integral = !relax;
  s.placement_variables = n;
  std::size_t arcs = 0;
  for (Vertex v = 0; v < n; ++v) arcs += g.degree(v);
  s.flow_variables = n * arcs;

  out << "\\ optimal pebbling model, " << n << " vertices, " << g.size() << " edges\n";
  out << "Minimize\n obj:";
  {
    detail::LpRow row(out);
    for (Vertex v = 0; v < n; ++v) row.term((v ? "+ P_" : "P_") + std::to_string(v));
  }
  out << "\nSubject To\n";
  for (Vertex i = 0; i < n; ++i) {
    out << " t_" << i << ":";
    detail::balance_row(out, g, i, i);
    out << " >= 1\n";
    ++s.target_constraints;
  }
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = 0; j < n; ++j) {
      out << " m_" << i << "_" << j << ":";
      detail::balance_row(out, g, i, j);
      out << " >= 0\n";
      ++s.intermediate_constraints;
    }
  }
  out << "Bounds\n";
  for (Vertex v = 0; v < n; ++v) out << " P_" << v << " >= 0\n";
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j)
      for (Vertex k : g.neighbors(j)) out << ' ' << detail::flow(i, j, k) << " >= 0\n";
  if (!relax) {
    out << "General\n";
    for (Vertex v = 0; v < n; ++v) out << " P_" << v << '\n';
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = 0; j < n; ++j)
        for (Vertex k : g.neighbors(j)) out << ' ' << detail::flow(i, j, k) << '\n';
  }
  out << "End\n";
  out.flush();
  if (!out) throw Error(ErrorCode::write_failure, "failed to write the LP model");
  return s;
}

}  // namespace pebble
