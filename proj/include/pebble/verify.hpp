#pragma once

// Exhaustive verification suites. Each suite sweeps a family of small
// instances, counts the checks it made, and records violations with a short
// description of the first few offenders.
//
// The instance sweep: every connected graph on up to min(max_n, 6) vertices
// (plus optional random connected graphs up to max_n vertices), every unit U
// of the configured sizes at every vertex u, and every P with P(u) = 0 and
// |P| <= max_pebbles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pebble/aux_graph.hpp"
#include "pebble/bounds.hpp"
#include "pebble/decomposition.hpp"
#include "pebble/engine.hpp"
#include "pebble/graph.hpp"
#include "pebble/parallel.hpp"
#include "pebble/solver.hpp"

namespace pebble {

struct SuiteResult {
  SuiteResult() = default;
  explicit SuiteResult(std::string suite) : name(std::move(suite)) {}

  std::string name;
  std::uint64_t instances = 0;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> failures;  // first few offenders
  std::map<std::string, std::uint64_t> counters;

  bool pass() const { return violations == 0 && checks > 0; }

  void check(bool ok, const std::function<std::string()>& describe, std::size_t keep = 8) {
    ++checks;
    if (ok) return;
    ++violations;
    if (failures.size() < keep) failures.push_back(describe());
  }

  void merge(const SuiteResult& other, std::size_t keep = 8) {
    instances += other.instances;
    checks += other.checks;
    violations += other.violations;
    for (const auto& f : other.failures)
      if (failures.size() < keep) failures.push_back(f);
    for (const auto& [k, v] : other.counters) counters[k] += v;
  }
};

struct VerifyOptions {
  std::size_t max_n = 6;
  Count max_pebbles = 4;
  std::vector<Count> unit_sizes{2, 3, 4};
  // Random connected graphs added to the exhaustive family, with orders in
  // [2, random_max_n] and edge probability drawn per graph.
  std::size_t random_graphs = 0;
  std::size_t random_max_n = 8;
  std::uint64_t seed = 20240601;
  // Torus sides and unit sizes for the torus suite.
  std::size_t torus_min = 5;
  std::size_t torus_max = 7;
  Count torus_unit_max = 12;
  unsigned jobs = 1;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"engine",   "cooperation", "lemma41", "theorem22", "claim35",
                                              "aux",      "torus",       "paths"};
  return names;
}

// ---------------------------------------------------------------------------
// Graph family

inline std::vector<Graph> sweep_graphs(const VerifyOptions& options) {
  std::vector<Graph> graphs;
  const std::size_t exhaustive = std::min<std::size_t>(options.max_n, 6);
  for (std::size_t n = 1; n <= exhaustive; ++n) {
    for (auto& g : enumerate_connected_graphs(n)) graphs.push_back(std::move(g));
  }
  if (options.random_graphs > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> order(2, std::max<std::size_t>(2, options.random_max_n));
    std::uniform_real_distribution<double> density(0.2, 0.7);
    for (std::size_t i = 0; i < options.random_graphs; ++i) {
      const std::size_t n = order(rng);
      graphs.push_back(random_connected_graph(n, density(rng), rng));
    }
  }
  return graphs;
}

// Calls fn(counts) for every count vector over n slots with total <= max_total
// and zero at every forbidden slot.
inline void for_each_distribution(std::size_t n, Count max_total, const std::vector<bool>& forbidden,
                                  const std::function<void(const std::vector<Count>&)>& fn) {
  std::vector<Count> counts(n, 0);
  std::function<void(std::size_t, Count)> rec = [&](std::size_t v, Count left) {
    if (v == n) {
      fn(counts);
      return;
    }
    if (!forbidden.empty() && forbidden[v]) {
      rec(v + 1, left);
      return;
    }
    for (Count c = 0; c <= left; ++c) {
      counts[v] = c;
      rec(v + 1, left - c);
    }
    counts[v] = 0;
  };
  rec(0, max_total);
}

inline std::string describe(const Graph& g, const PebbleDistribution& p) {
  std::string edges;
  for (auto [a, b] : g.edges()) edges += (edges.empty() ? "" : " ") + std::to_string(a) + "-" + std::to_string(b);
  return "n=" + std::to_string(g.order()) + " edges[" + edges + "] P=" + to_string(p);
}

inline std::string describe(const Graph& g, const PebbleDistribution& p, const UnitDistribution& u) {
  return describe(g, p) + " U=" + std::to_string(u.vertex) + ":" + std::to_string(u.count);
}

// ---------------------------------------------------------------------------
// Cooperation checks on one (P, U) instance

inline void check_cooperation_claims(const Graph& g, const PebbleDistribution& p, const UnitDistribution& u,
                                     const CooperationReport& r, const ReachabilityReport& rp,
                                     const ReachabilityReport& ru, const ReachabilityReport& rs,
                                     SuiteResult& out) {
  const std::size_t n = g.order();
  auto where = [&] { return describe(g, p, u); };

  // cov(P+U) = cov(P) + cov(U) + coop - DC
  out.check(static_cast<std::int64_t>(rs.cov()) ==
                static_cast<std::int64_t>(rp.cov() + ru.cov() + r.coop) - static_cast<std::int64_t>(r.dc),
            [&] { return "coverage identity: " + where(); });

  for (Vertex v = 0; v < n; ++v) {
    // superadditivity of reach makes per-vertex cooperation excess nonnegative
    out.check(r.per_vertex_ce[v] >= 0, [&] { return "negative vertex CE at " + std::to_string(v) + ": " + where(); });

    if (r.is_coop(v)) {
      // a cooperation vertex has a neighbor with cooperation excess
      const auto& nb = g.neighbors(v);
      out.check(std::any_of(nb.begin(), nb.end(), [&](Vertex x) { return r.has_ce(x); }),
                [&] { return "coop vertex without CE neighbor " + std::to_string(v) + ": " + where(); });

      // a cooperation vertex that can hold two pebbles is fed from below in M
      if (!r.m_values.empty() && !r.m_values[v].is_infinite()) {
        const MValue mc = r.m_values[v];
        std::size_t lower_ce = 0;
        bool heavy = false;
        for (Vertex x : nb) {
          if (!(r.m_values[x] < mc)) continue;
          if (r.per_vertex_ce[x] >= 1) ++lower_ce;
          if (r.per_vertex_ce[x] >= 3) heavy = true;
        }
        out.check(lower_ce >= 2 || heavy,
                  [&] { return "coop vertex " + std::to_string(v) + " lacks lower-M feeders: " + where(); });
      }
    }

    if (r.has_ce(v)) {
      // a vertex with cooperation excess has a neighbor with cooperation excess
      // or one reachable under P or U
      const auto& nb = g.neighbors(v);
      out.check(std::any_of(nb.begin(), nb.end(),
                            [&](Vertex x) { return r.has_ce(x) || rp.covered(x) || ru.covered(x); }),
                [&] { return "isolated CE vertex " + std::to_string(v) + ": " + where(); });
    }

    if (r.per_vertex_ce[v] >= 3 && !r.m_values.empty()) {
      const auto& nb = g.neighbors(v);
      const bool coop_neighbor = std::any_of(nb.begin(), nb.end(), [&](Vertex x) { return r.is_coop(x); });
      if (coop_neighbor) {
        out.check(std::any_of(nb.begin(), nb.end(), [&](Vertex x) { return r.m_values[x] <= r.m_values[v]; }),
                  [&] { return "heavy vertex " + std::to_string(v) + " without lower-M neighbor: " + where(); });
      }
    }
  }

  // cooperation excess at the unit's vertex forces it to be double covered
  if (r.has_ce(u.vertex)) {
    out.check(r.is_dc(u.vertex), [&] { return "unit vertex has CE but is not DC: " + where(); });
  }
  // a double covered unit vertex with two or more pebbles has a double
  // covered neighbor
  if (u.count >= 2 && r.is_dc(u.vertex)) {
    const auto& nb = g.neighbors(u.vertex);
    out.check(std::any_of(nb.begin(), nb.end(), [&](Vertex x) { return r.is_dc(x); }),
              [&] { return "DC unit vertex without DC neighbor: " + where(); });
  }
  // every C-block holds two vertices that are double covered or
  // cooperation free
  for (const auto& block : c_blocks(g, r)) {
    const auto good = std::count_if(block.begin(), block.end(),
                                    [&](Vertex x) { return r.is_dc(x) || r.cooperation_free(x); });
    out.check(good >= 2, [&] { return "C-block with fewer than two anchors: " + where(); });
  }
}

// ---------------------------------------------------------------------------
// Instance sweep shared by cooperation, lemma41 and aux

struct InstanceSuites {
  bool cooperation = false;
  bool lemma41 = false;
  bool aux = false;
};

struct InstanceResults {
  SuiteResult cooperation{"cooperation"};
  SuiteResult lemma41{"lemma41"};
  SuiteResult aux{"aux"};
};

inline void sweep_graph_instances(const Graph& g, const VerifyOptions& options, const InstanceSuites& which,
                                  InstanceResults& out) {
  const std::size_t n = g.order();
  const auto delta = static_cast<std::int64_t>(g.max_degree());
  AnalysisCache cache;
  CooperationOptions co;
  co.cache = &cache;
  co.compute_m = which.cooperation || (which.aux && delta >= 3);

  for (Vertex uv = 0; uv < n; ++uv) {
    std::vector<bool> forbidden(n, false);
    forbidden[uv] = true;
    for (Count size : options.unit_sizes) {
      const UnitDistribution u{uv, size};
      const PebbleDistribution unit = u.on(g);
      for_each_distribution(n, options.max_pebbles, forbidden, [&](const std::vector<Count>& counts) {
        const PebbleDistribution p(g, counts);
        const auto r = cooperation(p, unit, co);

        if (which.lemma41) {
          ++out.lemma41.instances;
          out.lemma41.check(static_cast<std::int64_t>(r.coop) - static_cast<std::int64_t>(r.dc) <= (delta - 2) * r.ce,
                            [&] {
                              return "coop=" + std::to_string(r.coop) + " dc=" + std::to_string(r.dc) +
                                     " ce=" + std::to_string(r.ce) + ": " + describe(g, p, u);
                            });
        }
        if (which.cooperation) {
          ++out.cooperation.instances;
          const auto& rp = cache.get(p);
          const auto& ru = cache.get(unit);
          const auto& rs = cache.get(sum(p, unit));
          check_cooperation_claims(g, p, u, r, rp, ru, rs, out.cooperation);
        }
        if (which.aux && delta >= 3) {
          auto& s = out.aux;
          ++s.instances;
          const auto where = [&] { return describe(g, p, u); };
          try {
            const AuxGraph a0 = aux_from_report(g, r);
            const auto initial = a0.sums();
            const auto props = check_aux_properties(a0);
            if (!props.saturated_support.pass) ++s.counters["a0_property8_failures"];
            if (!props.heavy_neighbor.pass) ++s.counters["a0_property9_failures"];
            if (!props.witness_paths.pass) ++s.counters["a0_property10_failures"];
            if (!props.block_witnesses.pass) ++s.counters["a0_property11_failures"];
            if (a0.saturated_count() > 0) ++s.counters["instances_with_saturated"];

            FixpointOptions fo;
            fo.check_each_step = true;
            const auto fixed = run_to_fixpoint(a0, fo);
            s.counters["transformation_steps"] += fixed.trace.size();
            for (const auto& step : fixed.trace) ++s.counters["kind" + std::to_string(step.kind) + "_steps"];
            s.counters["step_property_failures"] += fixed.property_failures.size();

            bool sums_each_step = true;
            for (const auto& step : fixed.trace) sums_each_step = sums_each_step && step.before == step.after;
            s.check(sums_each_step && fixed.graph.sums() == initial, [&] { return "sums changed: " + where(); });
            s.check(fixed.graph.saturated_count() == 0, [&] { return "saturated vertex left: " + where(); });
            const auto audit = audit_blocks(fixed.graph);
            s.counters["final_a_blocks"] += audit.blocks;
            s.check(audit.lemma_violations == 0, [&] { return "A-block inequality fails: " + where(); });
            s.check(audit.counting_violations == 0, [&] { return "boundary/inner count fails: " + where(); });
            s.check(audit.global_ok, [&] { return "global inequality fails: " + where(); });
            // Transformation 2 joins both w^1 and w^2 to x, so x can end up
            // above the maximum degree; counted, not treated as a failure.
            if (fixed.graph.max_degree() > static_cast<std::size_t>(delta)) ++s.counters["degree_above_delta"];
          } catch (const Error& e) {
            s.check(false, [&] { return std::string(to_string(e.code())) + " (" + e.what() + "): " + where(); });
          }
        }
      });
    }
  }
}

inline InstanceResults run_instance_suites(const VerifyOptions& options, const InstanceSuites& which) {
  const auto graphs = sweep_graphs(options);
  std::vector<InstanceResults> partial(graphs.size());
  parallel_for(graphs.size(), options.jobs,
               [&](std::size_t i) { sweep_graph_instances(graphs[i], options, which, partial[i]); });
  InstanceResults total;
  for (const auto& r : partial) {
    total.cooperation.merge(r.cooperation);
    total.lemma41.merge(r.lemma41);
    total.aux.merge(r.aux);
  }
  for (auto* s : {&total.cooperation, &total.lemma41, &total.aux}) s->counters["graphs"] = graphs.size();
  return total;
}

// ---------------------------------------------------------------------------
// Distribution sweeps: the excess inequality and the decomposition identities
// over every distribution of total size <= max_pebbles + max unit size.

struct DistributionResults {
  SuiteResult theorem22{"theorem22"};
  SuiteResult claim35{"claim35"};
};

inline DistributionResults run_distribution_suites(const VerifyOptions& options, bool theorem22, bool claim35) {
  const auto graphs = sweep_graphs(options);
  const Count unit_max =
      options.unit_sizes.empty() ? 0 : *std::max_element(options.unit_sizes.begin(), options.unit_sizes.end());
  const Count max_total = options.max_pebbles + unit_max;
  std::vector<DistributionResults> partial(graphs.size());
  parallel_for(graphs.size(), options.jobs, [&](std::size_t i) {
    const Graph& g = graphs[i];
    AnalysisCache cache;
    const auto ef = effects(g);
    auto& out = partial[i];
    for_each_distribution(g.order(), max_total, {}, [&](const std::vector<Count>& counts) {
      const PebbleDistribution p(g, counts);
      const auto& report = cache.get(p);
      if (theorem22 && report.solvable) {
        ++out.theorem22.instances;
        const auto check = excess_inequality_check(ef, p, report);
        out.theorem22.check(check.holds(), [&] { return "excess inequality fails: " + describe(g, p); });
        if (check.slack() == 0) ++out.theorem22.counters["tight"];
      }
      if (claim35) {
        ++out.claim35.instances;
        const auto id = decomposition_identities(p, &cache);
        out.claim35.check(id.te_balanced(), [&] { return "excess identity fails: " + describe(g, p); });
        out.claim35.check(id.cov_balanced(), [&] { return "coverage identity fails: " + describe(g, p); });
      }
    });
  });
  DistributionResults total;
  for (const auto& r : partial) {
    total.theorem22.merge(r.theorem22);
    total.claim35.merge(r.claim35);
  }
  total.theorem22.counters["graphs"] = graphs.size();
  total.claim35.counters["graphs"] = graphs.size();
  return total;
}

// ---------------------------------------------------------------------------
// Engine: state search against plain enumeration of every move sequence.

// Largest count each vertex attains over all move sequences, by visiting
// every reachable distribution.
inline std::vector<Count> naive_reach_all(const PebbleDistribution& p) {
  const Graph& g = p.graph();
  std::vector<Count> best(p.counts().begin(), p.counts().end());
  std::vector<Count> state = best;
  std::function<void()> rec = [&] {
    for (Vertex a = 0; a < g.order(); ++a) {
      if (state[a] < 2) continue;
      for (Vertex b : g.neighbors(a)) {
        state[a] -= 2;
        state[b] += 1;
        best[b] = std::max(best[b], state[b]);
        rec();
        state[a] += 2;
        state[b] -= 1;
      }
    }
  };
  rec();
  return best;
}

inline SuiteResult run_engine_suite(const VerifyOptions& options) {
  SuiteResult out{"engine"};
  VerifyOptions small = options;
  small.random_graphs = 0;
  const auto graphs = sweep_graphs(small);
  const Count max_total = std::min<Count>(options.max_pebbles + 1, 5);
  for (const Graph& g : graphs) {
    for_each_distribution(g.order(), max_total, {}, [&](const std::vector<Count>& counts) {
      const PebbleDistribution p(g, counts);
      ++out.instances;
      const auto expected = naive_reach_all(p);
      const auto report = analyze(p);
      out.check(report.reach == expected, [&] { return "reach mismatch: " + describe(g, p); });
    });
  }
  // unit closed form on paths, cycles, grids and tori
  std::vector<Graph> families;
  for (std::size_t n : {2, 5, 9}) families.push_back(make_path(n));
  for (std::size_t n : {3, 6, 9}) families.push_back(make_cycle(n));
  families.push_back(make_grid(3, 4));
  families.push_back(make_torus(5, 5));
  for (const Graph& g : families) {
    for (Count size = 1; size <= 16; ++size) {
      const PebbleDistribution p(g, {{0, size}});
      const auto report = analyze(p);
      std::uint64_t cov = 0;
      std::uint64_t te = 0;
      const auto layers = g.layer_sizes(0);
      for (std::size_t i = 0; i < layers.size() && (size >> i) >= 1; ++i) {
        cov += layers[i];
        te += layers[i] * ((size >> i) - 1);
      }
      ++out.instances;
      out.check(report.cov() == cov && report.total_excess == te,
                [&] { return "unit formula mismatch: " + describe(g, p); });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Torus: unit coverage caps, unit excess floors, effect and layer sizes.

inline SuiteResult run_torus_suite(const VerifyOptions& options) {
  SuiteResult out{"torus"};
  for (std::size_t m = options.torus_min; m <= options.torus_max; ++m) {
    for (std::size_t n = m; n <= options.torus_max; ++n) {
      const Graph g = make_torus(m, n);
      for (Vertex v = 0; v < g.order(); ++v) {
        const auto ef = effect(g, v);
        out.check(ef < 9, [&] { return "effect " + to_string(ef) + " on torus " + std::to_string(m) + "x" + std::to_string(n); });
        const auto layers = g.layer_sizes(v);
        out.check(layers.size() > 1 && layers[1] == 4, [&] { return "first layer is not 4"; });
        for (std::size_t i = 1; i < layers.size(); ++i) {
          out.check(layers[i] <= 4 * i, [&] { return "layer " + std::to_string(i) + " exceeds 4i"; });
        }
        for (Count size = 1; size <= options.torus_unit_max; ++size) {
          const PebbleDistribution unit(g, {{v, size}});
          const auto report = analyze(unit);
          const auto est = unit_estimates(m, n, size);
          ++out.instances;
          const auto where = [&] {
            return "torus " + std::to_string(m) + "x" + std::to_string(n) + " unit " + std::to_string(v) + ":" +
                   std::to_string(size);
          };
          out.check(Rational(report.cov()) <= est.cov_cap, [&] { return "coverage cap fails: " + where(); });
          out.check(Rational(report.total_excess) >= est.exc_floor, [&] { return "excess floor fails: " + where(); });
          if (Rational(report.total_excess) == est.exc_floor) ++out.counters["tight_excess_floor"];
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paths and cycles: exact optimal pebbling numbers and the 3/2 coverage cap.

inline SuiteResult run_paths_suite(const VerifyOptions& options) {
  SuiteResult out{"paths"};
  const std::size_t top = std::max<std::size_t>(options.max_n, 10);
  for (std::size_t n = 1; n <= top; ++n) {
    for (int cyc = 0; cyc < 2; ++cyc) {
      if (cyc && n < 3) continue;
      const GraphSpec spec{cyc ? Family::cycle : Family::path, 0, n};
      const Graph g = build(spec);
      SolveOptions so;
      so.spec = spec;
      so.automorphisms = known_automorphisms(spec, g.order());
      so.jobs = options.jobs;
      const auto result = solve(g, so);
      ++out.instances;
      out.check(result.pi_opt == path_cycle_bound(n), [&] {
        return std::string(cyc ? "cycle " : "path ") + std::to_string(n) + ": got " + std::to_string(result.pi_opt);
      });
      out.check(is_solvable(g, result.witness), [&] { return "witness not solvable"; });
      // units: coverage at most 3/2 of the unit size
      for (Vertex v = 0; v < g.order(); ++v) {
        for (Count size = 1; size <= 16; ++size) {
          const auto report = analyze(PebbleDistribution(g, {{v, size}}));
          out.check(2 * report.cov() <= 3 * static_cast<std::uint64_t>(size), [&] {
            return "coverage above 3/2 on " + std::string(cyc ? "cycle " : "path ") + std::to_string(n);
          });
        }
      }
    }
  }
  return out;
}

// Runs the named suites ("all" expands to every suite), sharing sweeps.
inline std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const VerifyOptions& options) {
  std::set<std::string> want;
  for (const auto& name : names) {
    if (name == "all") {
      want.insert(suite_names().begin(), suite_names().end());
    } else if (std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end()) {
      want.insert(name);
    } else {
      throw Error(ErrorCode::parse_error, "unknown suite '" + name + "'");
    }
  }
  std::vector<SuiteResult> out;
  if (want.count("engine")) out.push_back(run_engine_suite(options));
  InstanceSuites which{want.count("cooperation") > 0, want.count("lemma41") > 0, want.count("aux") > 0};
  if (which.cooperation || which.lemma41 || which.aux) {
    auto r = run_instance_suites(options, which);
    if (which.cooperation) out.push_back(std::move(r.cooperation));
    if (which.lemma41) out.push_back(std::move(r.lemma41));
    if (which.aux) out.push_back(std::move(r.aux));
  }
  if (want.count("theorem22") || want.count("claim35")) {
    auto r = run_distribution_suites(options, want.count("theorem22") > 0, want.count("claim35") > 0);
    if (want.count("theorem22")) out.push_back(std::move(r.theorem22));
    if (want.count("claim35")) out.push_back(std::move(r.claim35));
  }
  if (want.count("torus")) out.push_back(run_torus_suite(options));
  if (want.count("paths")) out.push_back(run_paths_suite(options));
  return out;
}

}  // namespace pebble
