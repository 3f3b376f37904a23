#include "qgreedy/solver.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "qgreedy/canonical.hpp"
#include "qgreedy/errors.hpp"
#include "qgreedy/lightcone.hpp"

namespace qgreedy {

std::string_view to_string(TieBreak t) { return t == TieBreak::random ? "random" : "lowest-id"; }

std::string_view to_string(Advice a) {
  switch (a) {
    case Advice::ideal: return "ideal";
    case Advice::shots: return "shots";
    case Advice::noise: return "noise";
  }
  return "?";
}

TieBreak tie_break_from_string(std::string_view name) {
  if (name == "random") return TieBreak::random;
  if (name == "lowest-id") return TieBreak::lowest_id;
  throw std::invalid_argument(fmt::format("unknown tie-break rule '{}'", name));
}

Advice advice_from_string(std::string_view name) {
  for (Advice a : {Advice::ideal, Advice::shots, Advice::noise})
    if (to_string(a) == name) return a;
  throw std::invalid_argument(fmt::format("unknown advice source '{}'", name));
}

void SolverConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("solver: depth must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("solver: delta must be >= 0");
  angles.validate();
  if (angles.depth != depth)
    throw std::invalid_argument(fmt::format("solver: angle schedule has depth {}, solver depth is {}", angles.depth, depth));
  if (advice == Advice::shots && shots < 1) throw std::invalid_argument("solver: shots must be >= 1");
  if (advice == Advice::noise) noise.validate();
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

NodeId pick(const std::vector<NodeId>& candidates, TieBreak rule, std::mt19937_64& rng) {
  if (rule == TieBreak::lowest_id || candidates.size() == 1) return candidates.front();
  std::uniform_int_distribution<std::size_t> at(0, candidates.size() - 1);
  return candidates[at(rng)];
}

void finish(SolveTrace& trace) {
  trace.independent_set.reserve(trace.steps.size());
  for (const auto& s : trace.steps) trace.independent_set.push_back(s.node);
}

}  // namespace

SolveTrace solve_quantum_greedy(const Graph& input, const SolverConfig& cfg, ExpectationStore& store,
                                const AdviceObserver& observer) {
  cfg.validate();
  if (input.empty()) throw std::invalid_argument("solver: graph has no alive nodes");
  Graph g = input;
  const int n = g.node_count();
  const int p = cfg.depth;
  std::optional<NoiseRealization> realization;
  if (cfg.advice == Advice::noise) realization.emplace(cfg.noise);

  std::vector<double> advice(n, -std::numeric_limits<double>::infinity());
  std::vector<std::string> keys(n);
  auto evaluate = [&](NodeId j) {
    const LightCone cone = extract_lightcone(g, j, p);
    const CanonicalKey key = canonical_key(cone);
    double ideal;
    if (const auto hit = store.find(key)) {
      ideal = hit->value;
    } else {
      Engine used = Engine::automatic;
      ideal = evaluate_cone(cone, cfg.angles, cfg.engine, &used);
      store.insert({key, ideal, used, cone.size()});
    }
    switch (cfg.advice) {
      case Advice::ideal:
        advice[j] = ideal;
        break;
      case Advice::shots:
        advice[j] = sample_shots(std::clamp(ideal, -1.0, 1.0), cfg.shots, mix(cfg.seed ^ stable_hash(key.bytes())));
        break;
      case Advice::noise:
        advice[j] = realization->apply(std::clamp(ideal, -1.0, 1.0), cone.size(), key);
        break;
    }
    keys[j] = key.hex();
  };

  for (NodeId j = 0; j < n; ++j)
    if (g.alive(j)) evaluate(j);
  if (observer) observer(advice, g);

  std::mt19937_64 rng(cfg.seed);
  SolveTrace trace;
  trace.node_count = n;
  std::vector<NodeId> candidates;
  while (!g.empty()) {
    candidates.clear();
    if (cfg.take_isolated_first)
      for (NodeId j = 0; j < n && candidates.empty(); ++j)
        if (g.alive(j) && g.degree(j) == 0) candidates.push_back(j);
    if (candidates.empty()) {
      double best = -std::numeric_limits<double>::infinity();
      for (NodeId j = 0; j < n; ++j)
        if (g.alive(j)) best = std::max(best, advice[j]);
      for (NodeId j = 0; j < n; ++j)
        if (g.alive(j) && advice[j] >= best - cfg.delta) candidates.push_back(j);
    }
    const NodeId i = pick(candidates, cfg.tie_break, rng);
    SolveStep step{i, advice[i], keys[i], 0, {}};
    if (cfg.record_candidates) step.candidates = candidates;

    const NodeSet affected = cfg.full_recompute ? NodeSet{} : affected_nodes(g, i, p);
    step.removed = static_cast<int>(g.remove_closed_neighborhood(i).size());
    trace.steps.push_back(std::move(step));
    if (cfg.full_recompute) {
      for (NodeId j = 0; j < n; ++j)
        if (g.alive(j)) evaluate(j);
    } else {
      for (NodeId j : affected)
        if (g.alive(j)) evaluate(j);
    }
    if (observer && !g.empty()) observer(advice, g);
  }
  finish(trace);
  return trace;
}

SolveTrace solve_classical_greedy(const Graph& input, std::uint64_t seed, bool record_candidates) {
  if (input.empty()) throw std::invalid_argument("solver: graph has no alive nodes");
  Graph g = input;
  const int n = g.node_count();
  std::mt19937_64 rng(seed);
  SolveTrace trace;
  trace.node_count = n;
  std::vector<NodeId> candidates;
  while (!g.empty()) {
    int min_degree = std::numeric_limits<int>::max();
    for (NodeId j = 0; j < n; ++j)
      if (g.alive(j)) min_degree = std::min(min_degree, g.degree(j));
    candidates.clear();
    for (NodeId j = 0; j < n; ++j)
      if (g.alive(j) && g.degree(j) == min_degree) candidates.push_back(j);
    const NodeId i = pick(candidates, TieBreak::random, rng);
    SolveStep step{i, static_cast<double>(min_degree), {}, 0, {}};
    if (record_candidates) step.candidates = candidates;
    step.removed = static_cast<int>(g.remove_closed_neighborhood(i).size());
    trace.steps.push_back(std::move(step));
  }
  finish(trace);
  return trace;
}

namespace {

class ExactMis {
 public:
  explicit ExactMis(std::vector<std::uint64_t> adj) : adj_(std::move(adj)) {}

  std::uint64_t solve(std::uint64_t mask) const {
    if (mask == 0) return 0;
    const std::uint64_t comp = component(mask);
    if (comp != mask) return solve(comp) | solve(mask & ~comp);
    int branch = -1, branch_degree = -1;
    for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const int deg = std::popcount(adj_[v] & mask);
      // a vertex of degree <= 1 is always in some maximum set
      if (deg <= 1) return bit(v) | solve(mask & ~(bit(v) | adj_[v]));
      if (deg > branch_degree) {
        branch = v;
        branch_degree = deg;
      }
    }
    const std::uint64_t with = bit(branch) | solve(mask & ~(bit(branch) | adj_[branch]));
    // excluding `branch` leaves popcount(mask) - 1 vertices at most
    if (std::popcount(mask) - 1 <= std::popcount(with)) return with;
    const std::uint64_t without = solve(mask & ~bit(branch));
    return std::popcount(without) > std::popcount(with) ? without : with;
  }

 private:
  static std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

  std::uint64_t component(std::uint64_t mask) const {
    std::uint64_t seen = mask & (~mask + 1), frontier = seen;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj_[std::countr_zero(f)];
      next &= mask & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  std::vector<std::uint64_t> adj_;
};

}  // namespace

NodeSet solve_exact(const Graph& g, int node_limit) {
  if (node_limit > 64) node_limit = 64;
  if (g.alive_count() > node_limit)
    throw CapacityError(fmt::format("exact solver: {} alive nodes exceed the limit of {}", g.alive_count(), node_limit));
  const NodeSet nodes = g.alive_nodes();
  std::vector<int> local(g.node_count(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<int>(k);
  std::vector<std::uint64_t> adj(nodes.size(), 0);
  for (const auto& [u, v] : g.edges()) {
    adj[local[u]] |= std::uint64_t{1} << local[v];
    adj[local[v]] |= std::uint64_t{1} << local[u];
  }
  const std::uint64_t all = nodes.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nodes.size()) - 1;
  const std::uint64_t best = ExactMis(std::move(adj)).solve(all);
  NodeSet out;
  for (std::uint64_t rest = best; rest; rest &= rest - 1) out.push_back(nodes[std::countr_zero(rest)]);
  return out;
}

double worst_case_bound(int d) {
  if (d < 1) throw std::invalid_argument("worst_case_bound: degree must be >= 1");
  return 3.0 / (d + 2.0);
}

void write_trace(std::ostream& out, const SolveTrace& trace) {
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    out << fmt::format("{} {} {:.17g} {}\n", k, s.node, s.value, s.key.empty() ? "-" : s.key);
  }
  out << fmt::format("set_size {} N {} ratio {:.17g}\n", trace.independent_set.size(), trace.node_count,
                     trace.ratio());
}

}  // namespace qgreedy
