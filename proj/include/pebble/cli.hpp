#pragma once

// Command-line front end. run() takes the arguments without the program
// name and returns the process exit code:
//   0 success, 1 verification failure, 2 usage or input error,
//   3 budget exceeded.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pebble/aux_graph.hpp"
#include "pebble/bounds.hpp"
#include "pebble/decomposition.hpp"
#include "pebble/engine.hpp"
#include "pebble/errors.hpp"
#include "pebble/graph.hpp"
#include "pebble/parallel.hpp"
#include "pebble/solver.hpp"
#include "pebble/verify.hpp"

namespace pebble::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kBudget = 3 };

namespace detail {

struct LoadedGraph {
  Graph graph;
  std::optional<GraphSpec> spec;
  std::string label;
};

inline LoadedGraph load_graph(const std::string& text) {
  if (auto spec = parse_graph_spec(text)) return {build(*spec), spec, text};
  std::ifstream in(text);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open graph file '" + text + "'");
  return {read_graph(in), std::nullopt, text};
}

inline PebbleDistribution load_distribution(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open distribution file '" + path + "'");
  return read_distribution(in, g);
}

inline UnitDistribution parse_unit(const std::string& text, const Graph& g) {
  const auto colon = text.find(':');
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (colon == std::string::npos || !digits(text.substr(0, colon)) || !digits(text.substr(colon + 1))) {
    throw Error(ErrorCode::parse_error, "unit must look like v:k, got '" + text + "'");
  }
  const auto v = std::stoull(text.substr(0, colon));
  const auto k = std::stoull(text.substr(colon + 1));
  if (v >= g.order()) throw Error(ErrorCode::vertex_out_of_range, "unit vertex " + std::to_string(v));
  return {static_cast<Vertex>(v), static_cast<Count>(k)};
}

template <class T>
std::string join(const std::vector<T>& values, const char* sep = ",") {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? sep : "") << values[i];
  return out.str();
}

inline std::string join_m(const std::vector<MValue>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + values[i].str();
  return out;
}

// Prints "key=value" lines in porcelain mode and aligned "key  value" rows
// otherwise.
class Printer {
 public:
  Printer(std::ostream& out, bool porcelain) : out_(out), porcelain_(porcelain) {}

  template <class T>
  void row(const std::string& key, const std::string& label, const T& value) {
    if (porcelain_) {
      out_ << key << '=' << value << '\n';
    } else {
      out_ << std::left << std::setw(26) << label << value << '\n';
    }
  }

  bool porcelain() const { return porcelain_; }
  std::ostream& stream() { return out_; }

 private:
  std::ostream& out_;
  bool porcelain_;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pebbling reachability, cooperation statistics, lower bounds and exact solving"};
  app.name("pebble");
  app.require_subcommand(1, 1);
  bool porcelain = false;
  unsigned jobs = default_jobs();
  app.add_flag("--porcelain", porcelain, "stable key=value output");
  app.add_option("--jobs", jobs, "worker threads (default: PEBBLE_JOBS or hardware concurrency)")
      ->check(CLI::PositiveNumber);

  std::string graph_arg;
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_arg, "path:n, cycle:n, grid:m,n, torus:m,n, complete:n, or a graph file")
        ->required();
  };

  auto* reach_cmd = app.add_subcommand("reach", "reach vector and total excess of a distribution");
  add_graph(reach_cmd);
  std::string dist_arg;
  long long target = -1;
  reach_cmd->add_option("--dist", dist_arg, "distribution file")->required();
  auto* target_opt = reach_cmd->add_option("--target", target, "single target vertex");
  reach_cmd->add_flag("--all", "report every vertex (default)")->excludes(target_opt);

  auto* coop_cmd = app.add_subcommand("coop", "cooperation statistics of P and a unit");
  add_graph(coop_cmd);
  std::string dist_p_arg;
  std::string unit_arg;
  coop_cmd->add_option("--dist-p", dist_p_arg, "distribution file for P")->required();
  coop_cmd->add_option("--unit", unit_arg, "unit as v:k")->required();

  auto* aux_cmd = app.add_subcommand("aux", "auxiliary graph transformations and the A-block audit");
  add_graph(aux_cmd);
  std::string trace_arg;
  aux_cmd->add_option("--dist-p", dist_p_arg, "distribution file for P")->required();
  aux_cmd->add_option("--unit", unit_arg, "unit as v:k")->required();
  aux_cmd->add_option("--trace", trace_arg, "write the step trace to this file");

  auto* bound_cmd = app.add_subcommand("bound", "lower bounds on the optimal pebbling number");
  add_graph(bound_cmd);
  bound_cmd->add_option("--dist", dist_arg, "solvable distribution for the distribution-level bounds");

  auto* ilp_cmd = app.add_subcommand("emit-ilp", "write the integer program in LP format");
  add_graph(ilp_cmd);
  std::string out_arg;
  bool relax = false;
  ilp_cmd->add_option("--out", out_arg, "output file ('-' for standard output)")->required();
  ilp_cmd->add_flag("--relax", relax, "drop integrality (LP relaxation)");

  auto* solve_cmd = app.add_subcommand("solve", "exact optimal pebbling number");
  add_graph(solve_cmd);
  std::string symmetry = "auto";
  std::uint64_t budget_nodes = 0;
  double budget_seconds = 0;
  bool no_bounds = false;
  std::uint32_t max_pebbles = 64;
  solve_cmd->add_option("--symmetry", symmetry, "orbit reduction")->check(CLI::IsMember({"auto", "none"}));
  solve_cmd->add_option("--budget-nodes", budget_nodes, "cap on distributions tested (0 = none)");
  solve_cmd->add_option("--budget-seconds", budget_seconds, "wall-clock cap (0 = none)");
  solve_cmd->add_option("--max-pebbles", max_pebbles, "largest size tried");
  solve_cmd->add_flag("--no-bounds", no_bounds, "start the search at one pebble");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  std::vector<std::string> suites;
  bool all_suites = false;
  VerifyOptions vopt;
  std::size_t random_graphs = 0;
  auto* suite_opt = verify_cmd->add_option("--suite", suites, "suite name (repeatable)")
                        ->check(CLI::IsMember(suite_names()));
  verify_cmd->add_flag("--all", all_suites, "run every suite")->excludes(suite_opt);
  verify_cmd->add_option("--max-n", vopt.max_n, "largest graph order (exhaustive up to 6)");
  verify_cmd->add_option("--max-pebbles", vopt.max_pebbles, "largest |P| in the sweeps");
  auto* random_opt = verify_cmd->add_option("--random", random_graphs, "extra random connected graphs");
  verify_cmd->add_option("--seed", vopt.seed, "seed for random graphs");
  verify_cmd->add_option("--torus-max", vopt.torus_max, "largest torus side for the torus suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (verify_cmd->parsed() && suites.empty() && !all_suites) {
    err << "error: verify needs --suite or --all\n";
    return kUsage;
  }

  detail::Printer print(out, porcelain);
  try {
    if (reach_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      const auto p = detail::load_distribution(dist_arg, lg.graph);
      if (target >= 0) {
        if (static_cast<std::size_t>(target) >= lg.graph.order()) {
          throw Error(ErrorCode::vertex_out_of_range, "target " + std::to_string(target));
        }
        print.row("reach", "reach(" + std::to_string(target) + ")", reach(p, static_cast<Vertex>(target)));
        return kOk;
      }
      AnalyzeOptions ao;
      ao.jobs = jobs;
      const auto r = analyze(p, ao);
      if (porcelain) {
        print.row("reach", "", detail::join(r.reach));
        print.row("excess", "", detail::join(r.excess));
      } else {
        out << "vertex  reach  excess\n";
        for (Vertex v = 0; v < lg.graph.order(); ++v) {
          out << std::setw(6) << v << std::setw(7) << r.reach[v] << std::setw(8) << r.excess[v] << '\n';
        }
      }
      print.row("total_excess", "total excess", r.total_excess);
      print.row("coverage", "coverage", r.cov());
      print.row("solvable", "solvable", r.solvable ? 1 : 0);
      return kOk;
    }

    if (coop_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      const auto p = detail::load_distribution(dist_p_arg, lg.graph);
      const auto u = detail::parse_unit(unit_arg, lg.graph);
      const auto r = cooperation(p, u);
      print.row("coop", "cooperation vertices", r.coop);
      print.row("dc", "double covered", r.dc);
      print.row("ce", "cooperation excess", r.ce);
      print.row("coop_vertices", "  coop set", "{" + detail::join(r.coop_vertices) + "}");
      print.row("dc_vertices", "  dc set", "{" + detail::join(r.dc_vertices) + "}");
      if (porcelain) {
        print.row("vertex_ce", "", detail::join(r.per_vertex_ce));
        print.row("m_values", "", detail::join_m(r.m_values));
      } else {
        out << "vertex  ce  M    coop  dc\n";
        for (Vertex v = 0; v < lg.graph.order(); ++v) {
          out << std::setw(6) << v << std::setw(4) << r.per_vertex_ce[v] << "  " << std::left << std::setw(5)
              << r.m_values[v].str() << std::right << std::setw(4) << (r.is_coop(v) ? 1 : 0) << std::setw(4)
              << (r.is_dc(v) ? 1 : 0) << '\n';
        }
      }
      return kOk;
    }

    if (aux_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      const auto p = detail::load_distribution(dist_p_arg, lg.graph);
      const auto u = detail::parse_unit(unit_arg, lg.graph);
      const AuxGraph a0 = build_a0(lg.graph, p, u);
      const auto props = check_aux_properties(a0);
      const auto initial = a0.sums();
      auto sums = [](const CoordinateSums& s) {
        return std::to_string(s.c1) + "," + std::to_string(s.c2) + "," + std::to_string(s.c3);
      };
      print.row("initial_sums", "initial sums", sums(initial));
      print.row("initial_saturated", "saturated in A_0", a0.saturated_count());
      const auto label = [](const PropertyResult& r) { return r.pass ? std::string("pass") : "FAIL " + r.witness; };
      print.row("property8", "property 8", label(props.saturated_support));
      print.row("property9", "property 9", label(props.heavy_neighbor));
      print.row("property10", "property 10", label(props.witness_paths));
      print.row("property11", "property 11", label(props.block_witnesses));
      if (lg.graph.max_degree() < 3) {
        print.row("status", "status", "skipped (maximum degree below 3)");
        return kOk;
      }
      FixpointOptions fo;
      fo.check_each_step = true;
      const auto fixed = run_to_fixpoint(a0, fo);
      if (!trace_arg.empty()) {
        std::ofstream trace(trace_arg);
        write_trace(trace, fixed.trace);
        if (!trace) throw Error(ErrorCode::write_failure, "cannot write trace '" + trace_arg + "'");
      }
      const auto final_sums = fixed.graph.sums();
      print.row("steps", "steps", fixed.trace.size());
      print.row("final_sums", "final sums", sums(final_sums));
      print.row("final_saturated", "saturated at the end", fixed.graph.saturated_count());
      print.row("final_vertices", "final vertices", fixed.graph.order());
      const auto blocks = a_blocks(fixed.graph);
      const auto slope = static_cast<std::int64_t>(fixed.graph.delta()) - 2;
      bool ok = final_sums == initial && fixed.graph.saturated_count() == 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        const bool lemma = b.sums.c2 - b.sums.c3 <= slope * b.sums.c1;
        const bool count = static_cast<std::int64_t>(b.boundary) <= slope * static_cast<std::int64_t>(b.inner) + 2;
        ok = ok && lemma && count;
        std::ostringstream row;
        row << "sums=" << b.sums.c1 << ',' << b.sums.c2 << ',' << b.sums.c3 << " inner=" << b.inner
            << " boundary=" << b.boundary << " inequality=" << (lemma ? "ok" : "FAIL")
            << " count=" << (count ? "ok" : "FAIL");
        print.row("block" + std::to_string(i), "A-block " + std::to_string(i), row.str());
      }
      const bool global = final_sums.c2 - final_sums.c3 <= slope * final_sums.c1;
      ok = ok && global;
      print.row("global_inequality", "global inequality", global ? "ok" : "FAIL");
      print.row("status", "status", ok ? "ok" : "FAIL");
      return ok ? kOk : kVerificationFailed;
    }

    if (bound_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      std::optional<PebbleDistribution> p;
      if (!dist_arg.empty()) p = detail::load_distribution(dist_arg, lg.graph);
      const auto r = bound_report(lg.graph, lg.label, lg.spec, p ? &*p : nullptr);
      print.row("graph", "graph", r.graph_id);
      print.row("vertices", "vertices", r.order);
      print.row("max_degree", "max degree", r.max_degree);
      for (const auto& [v, e] : r.effect) {
        std::ostringstream value;
        value << to_string(e) << " (" << std::setprecision(6) << to_double(e) << ")";
        print.row("effect_v" + std::to_string(v), "effect at " + std::to_string(v), value.str());
      }
      print.row("fractional_bound", "fractional bound", to_string(r.fractional_bound));
      print.row("fractional_bound_ceil", "  rounded up", ceil(r.fractional_bound));
      if (r.grid_bound) print.row("grid_bound", "grid bound", *r.grid_bound);
      if (r.path_cycle_value) print.row("path_cycle_value", "path/cycle value", *r.path_cycle_value);
      if (r.excess_bound) {
        print.row("excess_bound", "excess bound", to_string(*r.excess_bound));
      }
      if (r.structural_bound) {
        print.row("structural_bound", "structural bound", to_string(*r.structural_bound));
      }
      print.row("best_lower_bound", "best lower bound", r.best_graph_bound());
      for (std::size_t i = 0; i < r.notes.size(); ++i) print.row("note" + std::to_string(i), "note", r.notes[i]);
      return kOk;
    }

    if (ilp_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      IlpSummary s;
      if (out_arg == "-") {
        s = emit_ilp(lg.graph, out, relax);
      } else {
        std::ofstream file(out_arg);
        if (!file) throw Error(ErrorCode::write_failure, "cannot open '" + out_arg + "' for writing");
        s = emit_ilp(lg.graph, file, relax);
        print.row("variables", "variables", s.variables());
        print.row("placement_variables", "  placement", s.placement_variables);
        print.row("flow_variables", "  flow", s.flow_variables);
        print.row("constraints", "constraints", s.constraints());
        print.row("target_constraints", "  target", s.target_constraints);
        print.row("intermediate_constraints", "  intermediate", s.intermediate_constraints);
        print.row("integral", "integral", s.integral ? 1 : 0);
      }
      return kOk;
    }

    if (solve_cmd->parsed()) {
      const auto lg = detail::load_graph(graph_arg);
      SolveOptions so;
      so.spec = lg.spec;
      so.jobs = jobs;
      so.max_nodes = budget_nodes;
      so.max_seconds = budget_seconds;
      so.use_bounds = !no_bounds;
      so.max_pebbles = max_pebbles;
      if (symmetry == "auto" && lg.spec) so.automorphisms = known_automorphisms(*lg.spec, lg.graph.order());
      const auto started = std::chrono::steady_clock::now();
      try {
        const auto r = solve(lg.graph, so);
        const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - started;
        print.row("pi_opt", "optimal pebbling number", r.pi_opt);
        print.row("lower_bound_used", "search started at", r.lower_bound_used);
        if (porcelain) {
          print.row("witness", "", to_string(r.witness));
        } else {
          out << "witness\n";
          write_distribution(out, r.witness);
        }
        if (!porcelain) out << "stats (counts are deterministic, time is not)\n";
        print.row("stats_enumerated", "  enumerated", r.stats.enumerated);
        print.row("stats_orbit_skipped", "  orbit skipped", r.stats.orbit_skipped);
        print.row("stats_weight_rejected", "  weight rejected", r.stats.weight_rejected);
        print.row("stats_tested", "  tested", r.stats.tested);
        print.row("stats_states_expanded", "  states expanded", r.stats.states_expanded);
        print.row("stats_seconds", "  seconds", spent.count());
        return kOk;
      } catch (const BudgetExceeded& e) {
        print.row("status", "status", "budget exceeded");
        print.row("lower", "certified lower bound", e.lower());
        print.row("upper", "certified upper bound", e.upper());
        err << "error: " << e.what() << '\n';
        return kBudget;
      }
    }

    if (verify_cmd->parsed()) {
      vopt.jobs = jobs;
      if (random_opt->count() > 0) {
        vopt.random_graphs = random_graphs;
      } else if (vopt.max_n > 6) {
        vopt.random_graphs = 1000;
      }
      vopt.random_max_n = std::max<std::size_t>(vopt.max_n, 2);
      if (all_suites) suites = {"all"};
      const auto results = run_suites(suites, vopt);
      bool ok = true;
      for (const auto& s : results) {
        ok = ok && s.pass();
        out << "suite=" << s.name << " status=" << (s.pass() ? "PASS" : "FAIL") << " instances=" << s.instances
            << " checks=" << s.checks << " violations=" << s.violations << '\n';
        for (const auto& [k, v] : s.counters) out << "  " << s.name << '.' << k << '=' << v << '\n';
        for (const auto& f : s.failures) out << "  violation: " << f << '\n';
      }
      return ok ? kOk : kVerificationFailed;
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::budget_exceeded ? kBudget : kUsage;
  }
  return kUsage;
}

}  // namespace pebble::cli
