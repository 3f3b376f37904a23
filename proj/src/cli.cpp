#include "qgreedy/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qgreedy/angles.hpp"
#include "qgreedy/bench.hpp"
#include "qgreedy/census.hpp"
#include "qgreedy/errors.hpp"
#include "qgreedy/graph.hpp"
#include "qgreedy/noise.hpp"
#include "qgreedy/solver.hpp"

namespace qgreedy {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double lambda = 1.0;
  int depth = 1;
  std::string out;
};

// Writes through `out_path` when given, otherwise to the default stream.
template <class F>
void emit(const std::string& out_path, std::ostream& fallback, F&& write) {
  if (out_path.empty() || out_path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", out_path));
  write(file);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open graph file '{}'", path));
  return read_edge_list(in);
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Light-cone QAOA guided greedy maximum independent set", "qgreedy"};
  app.require_subcommand(1);
  Globals gl;
  app.add_option("--seed", gl.seed, "Random seed");
  app.add_option("--lambda", gl.lambda, "Penalty weight (>= 1)");
  app.add_option("--depth", gl.depth, "QAOA depth p");
  app.add_option("--out", gl.out, "Output path (default stdout)");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random regular graph as an edge list")->fallthrough();
  int gen_n = 0, gen_d = 3;
  gen->add_option("-n,--n", gen_n, "Number of nodes")->required();
  gen->add_option("-d,--degree", gen_d, "Degree");

  // angles
  auto* ang = app.add_subcommand("angles", "Optimize tree angles and write an angle file")->fallthrough();
  int ang_d = 3;
  OptimizerSettings ang_settings;
  ang->add_option("-d,--degree", ang_d, "Tree degree");
  ang->add_option("--restarts", ang_settings.restarts, "Random restarts");
  ang->add_option("--tolerance", ang_settings.tolerance, "Simplex size at convergence");
  std::string ang_warm;
  ang->add_flag("!--no-warm-start", ang_settings.warm_start, "Skip the depth-(p-1) warm start");
  ang->add_option("--warm", ang_warm, "Depth-(p-1) angle file used as warm start (default: optimize it first)");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve one instance and print its trace")->fallthrough();
  std::string sol_graph, sol_solver = "qgreedy", sol_angles, sol_angles_dir = "data/angles", sol_advice = "ideal",
                         sol_tie = "random", sol_engine = "auto", sol_delta = "0";
  int sol_n = 0, sol_degree = 3;
  std::uint64_t sol_graph_seed = 0;
  SolverConfig sol_cfg;
  sol->add_option("--graph", sol_graph, "Edge-list file");
  sol->add_option("-n,--n", sol_n, "Generate a random regular graph with this many nodes instead");
  sol->add_option("-d,--degree", sol_degree, "Degree of the generated graph");
  sol->add_option("--graph-seed", sol_graph_seed, "Seed of the generated graph (default --seed)");
  sol->add_option("--solver", sol_solver, "greedy | qgreedy | exact")
      ->check(CLI::IsMember({"greedy", "qgreedy", "exact"}));
  sol->add_option("--angles", sol_angles, "Angle file (default <angles-dir>/p<p>_d<d>_lambda<l>.txt)");
  sol->add_option("--angles-dir", sol_angles_dir, "Directory of shipped angle files");
  sol->add_option("--advice", sol_advice, "ideal | shots | noise")->check(CLI::IsMember({"ideal", "shots", "noise"}));
  sol->add_option("--shots", sol_cfg.shots, "Shots per cone (shots advice)");
  sol->add_option("--eta", sol_cfg.noise.eta, "Noise shrink rate");
  sol->add_option("--alpha", sol_cfg.noise.alpha, "Noise bias");
  sol->add_option("--sigma", sol_cfg.noise.sigma, "Noise offset std");
  sol->add_option("--noise-seed", sol_cfg.noise.seed, "Noise realization seed");
  sol->add_option("--delta", sol_delta, "Tie window, or 'auto' for the single-edge cutoff");
  sol->add_option("--tie-break", sol_tie, "random | lowest-id")->check(CLI::IsMember({"random", "lowest-id"}));
  sol->add_option("--engine", sol_engine, "auto | analytic | statevector | contraction")
      ->check(CLI::IsMember({"auto", "analytic", "statevector", "contraction"}));
  sol->add_flag("--full-recompute", sol_cfg.full_recompute, "Re-evaluate every node after each step");

  // census
  auto* cen = app.add_subcommand("census", "Enumerate all depth-p cones of max degree 3")->fallthrough();
  bool cen_list = false;
  cen->add_flag("--list", cen_list, "Also print every canonical key");

  // bench
  auto* ben = app.add_subcommand("bench", "Run an experiment plan and write CSV")->fallthrough();
  std::string ben_plan;
  int ben_threads = -1;
  bool ben_no_timestamp = false, ben_quiet = false;
  ben->add_option("--plan", ben_plan, "Plan file")->required();
  ben->add_option("--threads", ben_threads, "Worker threads (default from plan)");
  ben->add_flag("--no-timestamp", ben_no_timestamp, "Omit the timestamp line");
  ben->add_flag("-q,--quiet", ben_quiet, "No progress output");

  // fit-noise
  auto* fit = app.add_subcommand("fit-noise", "Fit eta, alpha, sigma to (ideal noisy cone_size) lines")->fallthrough();
  std::string fit_pairs;
  fit->add_option("--pairs", fit_pairs, "Pairs file")->required();

  // shots
  auto* sho = app.add_subcommand("shots", "Shot count from the Hoeffding bound")->fallthrough();
  long long sho_n = 0;
  double sho_eps = 0.0, sho_gap = 0.0;
  sho->add_option("--n", sho_n, "Problem size")->required();
  sho->add_option("--eps", sho_eps, "Failure probability")->required();
  sho->add_option("--gap", sho_gap, "Value gap")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (gen->parsed()) {
      const Graph g = generate_regular(gen_n, gen_d, gl.seed);
      emit(gl.out, out, [&](std::ostream& os) { write_edge_list(os, g); });
    } else if (ang->parsed()) {
      ang_settings.seed = gl.seed;
      std::optional<AngleSchedule> warm;
      if (!ang_warm.empty()) warm = load_angles(ang_warm);
      const AngleSchedule a =
          optimize_tree_angles(gl.depth, ang_d, gl.lambda, ang_settings, warm ? &*warm : nullptr);
      const std::vector<std::string> comments{
          fmt::format("optimize_tree_angles p={} d={} lambda={:g}", gl.depth, ang_d, gl.lambda),
          fmt::format("nelder-mead restarts={} seed={} warm_start={}{} max_iterations={} tolerance={:g}",
                      ang_settings.restarts, ang_settings.seed, ang_settings.warm_start,
                      ang_warm.empty() ? "" : " (" + std::filesystem::path(ang_warm).filename().string() + ")",
                      ang_settings.max_iterations, ang_settings.tolerance)};
      emit(gl.out, out, [&](std::ostream& os) { write_angles(os, a, comments); });
    } else if (sol->parsed()) {
      Graph g;
      if (!sol_graph.empty())
        g = read_graph_file(sol_graph);
      else if (sol_n > 0)
        g = generate_regular(sol_n, sol_degree, sol->count("--graph-seed") ? sol_graph_seed : gl.seed);
      else
        throw CLI::RequiredError("--graph or --n");
      SolveTrace trace;
      if (sol_solver == "greedy") {
        trace = solve_classical_greedy(g, gl.seed);
      } else if (sol_solver == "exact") {
        trace.node_count = g.node_count();
        trace.independent_set = solve_exact(g, 64);
      } else {
        const std::string path = !sol_angles.empty()
                                     ? sol_angles
                                     : (std::filesystem::path(sol_angles_dir) /
                                        angle_file_name(gl.depth, std::max(3, g.max_degree()), gl.lambda))
                                           .string();
        sol_cfg.depth = gl.depth;
        sol_cfg.angles = load_angles(path);
        sol_cfg.advice = advice_from_string(sol_advice);
        sol_cfg.tie_break = tie_break_from_string(sol_tie);
        sol_cfg.engine.engine = engine_from_string(sol_engine);
        sol_cfg.seed = gl.seed;
        if (sol_delta == "auto") {
          sol_cfg.delta = single_edge_cutoff(sol_cfg.angles, sol_cfg.engine);
        } else {
          try {
            sol_cfg.delta = std::stod(sol_delta);
          } catch (const std::exception&) {
            throw CLI::ValidationError("--delta", "expected a number or 'auto'");
          }
        }
        ExpectationStore store;
        trace = solve_quantum_greedy(g, sol_cfg, store);
      }
      emit(gl.out, out, [&](std::ostream& os) { write_trace(os, trace); });
    } else if (cen->parsed()) {
      const Census c = enumerate_cones(gl.depth);
      emit(gl.out, out, [&](std::ostream& os) {
        os << fmt::format("total {} trees {} nontrees {}\n", c.report.total, c.report.trees, c.report.non_trees);
        if (cen_list)
          for (std::size_t k = 0; k < c.keys.size(); ++k)
            os << fmt::format("{} {} {}\n", c.keys[k].hex(), c.keys[k].vertex_count(), c.keys[k].is_tree() ? "tree" : "nontree");
      });
    } else if (ben->parsed()) {
      ExperimentPlan plan = load_plan(ben_plan);
      if (!gl.out.empty()) plan.output = gl.out;
      if (ben_threads >= 0) plan.threads = ben_threads;
      if (ben_no_timestamp) plan.timestamp = false;
      std::function<void(int, int)> progress;
      if (!ben_quiet) progress = [&](int done, int total) { err << fmt::format("\r{}/{} instances", done, total) << std::flush; };
      const BenchmarkReport report = run_plan(plan, progress);
      if (!ben_quiet) err << '\n';
      if (plan.output.empty()) {
        write_csv(out, report, plan);
      } else {
        std::ofstream file(plan.output);
        if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", plan.output));
        write_csv(file, report, plan);
        file.close();
        std::filesystem::remove(plan.output + ".partial");
      }
    } else if (fit->parsed()) {
      std::ifstream in(fit_pairs);
      if (!in) throw std::runtime_error(fmt::format("cannot open pairs file '{}'", fit_pairs));
      std::vector<NoisePair> pairs;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        NoisePair p{};
        if (!(ls >> p.ideal >> p.noisy >> p.cone_size)) throw FormatError(fmt::format("bad pairs line '{}'", line));
        pairs.push_back(p);
      }
      const NoiseParams np = fit_noise(pairs);
      emit(gl.out, out, [&](std::ostream& os) {
        os << fmt::format("eta {:.6g} alpha {:.6g} sigma {:.6g}\n", np.eta, np.alpha, np.sigma);
      });
    } else if (sho->parsed()) {
      const long long m = required_shots(sho_n, sho_eps, sho_gap);
      emit(gl.out, out, [&](std::ostream& os) { os << m << '\n'; });
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace qgreedy
