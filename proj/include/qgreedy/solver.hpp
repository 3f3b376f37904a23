#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgreedy/circuit.hpp"
#include "qgreedy/expectation.hpp"
#include "qgreedy/graph.hpp"
#include "qgreedy/noise.hpp"

namespace qgreedy {

enum class TieBreak { random, lowest_id };
/// How ideal cone values are turned into the numbers the greedy step compares.
enum class Advice { ideal, shots, noise };

std::string_view to_string(TieBreak t);
std::string_view to_string(Advice a);
TieBreak tie_break_from_string(std::string_view name);
Advice advice_from_string(std::string_view name);

struct SolverConfig {
  int depth = 1;
  AngleSchedule angles;
  TieBreak tie_break = TieBreak::random;
  /// Values within `delta` of the maximum count as tied.
  double delta = 0.0;
  Advice advice = Advice::ideal;
  long long shots = 20000;   // Advice::shots
  NoiseParams noise;         // Advice::noise, one realization per noise.seed
  std::uint64_t seed = 0;    // tie-break stream and shot streams
  EngineOptions engine;
  /// Re-evaluate every alive node after each step instead of only the
  /// survivors within distance p + 1 of the selection.
  bool full_recompute = false;
  /// Select isolated vertices immediately (off for all reported numbers).
  bool take_isolated_first = false;
  /// Keep the tied candidate set of every step in the trace.
  bool record_candidates = false;

  void validate() const;
};

struct SolveStep {
  NodeId node;
  double value;     // advice value (quantum) or alive degree (classical)
  std::string key;  // hex canonical key of the selected node's cone; empty for classical
  int removed;
  std::vector<NodeId> candidates;  // only with record_candidates
};

struct SolveTrace {
  std::vector<SolveStep> steps;
  NodeSet independent_set;
  int node_count = 0;

  double ratio() const {
    return node_count == 0 ? 0.0 : static_cast<double>(independent_set.size()) / node_count;
  }
};

/// Called after every (re)evaluation round with the advice of all nodes
/// (entries of dead nodes are meaningless).
using AdviceObserver = std::function<void(std::span<const double> advice, const Graph& residual)>;

/// Greedy reduction steered by light-cone QAOA values: pick the node with
/// the largest advice (ties within delta broken per config), add it to the
/// set, delete its closed neighborhood, re-evaluate the affected survivors.
SolveTrace solve_quantum_greedy(const Graph& g, const SolverConfig& cfg, ExpectationStore& store,
                                const AdviceObserver& observer = {});

/// Minimum-degree greedy: a uniformly random alive vertex of minimum degree
/// is taken at each step.
SolveTrace solve_classical_greedy(const Graph& g, std::uint64_t seed, bool record_candidates = false);

/// Exact maximum independent set of the alive subgraph by branch and bound.
/// Throws CapacityError above `node_limit` alive nodes (hard cap 64).
NodeSet solve_exact(const Graph& g, int node_limit = 40);

/// Worst-case approximation ratio 3/(d+2) of minimum-degree greedy.
double worst_case_bound(int d);

// "step node value cone_key" per step, footer "set_size N ratio".
void write_trace(std::ostream& out, const SolveTrace& trace);

}  // namespace qgreedy
