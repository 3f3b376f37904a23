#include "qgreedy/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "qgreedy/errors.hpp"

namespace qgreedy {

Graph::Graph(int node_count)
    : adjacency_(node_count),
      alive_(node_count, 1),
      degree_(node_count, 0),
      alive_count_(node_count) {
  if (node_count < 0) throw std::invalid_argument("negative node count");
}

Graph Graph::from_edges(int node_count, std::span<const Edge> edges) {
  Graph g(node_count);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& a = adjacency_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

void Graph::add_edge(NodeId u, NodeId v) {
  if (!valid(u) || !valid(v))
    throw std::invalid_argument(fmt::format("edge ({}, {}) out of range", u, v));
  if (u == v) throw std::invalid_argument(fmt::format("self-loop at node {}", u));
  if (has_edge(u, v))
    throw std::invalid_argument(fmt::format("duplicate edge ({}, {})", u, v));
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  if (alive(u) && alive(v)) {
    ++degree_[u];
    ++degree_[v];
    ++edge_count_;
  }
}

NodeSet Graph::remove_closed_neighborhood(NodeId i) {
  if (!valid(i)) throw std::out_of_range(fmt::format("node {} out of range", i));
  if (!alive(i)) throw std::invalid_argument(fmt::format("node {} is not alive", i));
  NodeSet removed{i};
  for (NodeId j : adjacency_[i])
    if (alive(j)) removed.push_back(j);
  for (NodeId x : removed) {
    alive_[x] = 0;
    --alive_count_;
    for (NodeId y : adjacency_[x]) {
      // each alive-alive edge is dropped once, when its first endpoint dies
      if (alive(y)) {
        --degree_[y];
        --edge_count_;
      }
    }
    degree_[x] = 0;
  }
  return removed;
}

NodeSet Graph::alive_nodes() const {
  NodeSet out;
  out.reserve(alive_count_);
  for (NodeId i = 0; i < node_count(); ++i)
    if (alive(i)) out.push_back(i);
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u) {
    if (!alive(u)) continue;
    for (NodeId v : adjacency_[u])
      if (u < v && alive(v)) out.emplace_back(u, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Graph::max_degree() const {
  int best = 0;
  for (NodeId i = 0; i < node_count(); ++i)
    if (alive(i)) best = std::max(best, degree_[i]);
  return best;
}

std::vector<BallEntry> ball(const Graph& g, NodeId i, int radius) {
  if (!g.valid(i)) throw std::out_of_range(fmt::format("node {} out of range", i));
  if (!g.alive(i)) throw std::invalid_argument(fmt::format("node {} is not alive", i));
  if (radius < 0) throw std::invalid_argument("negative radius");
  std::vector<BallEntry> out{{i, 0}};
  std::vector<int> seen{i};
  auto visited = [&](NodeId v) {
    return std::find(seen.begin(), seen.end(), v) != seen.end();
  };
  for (std::size_t head = 0; head < out.size(); ++head) {
    const auto [u, du] = out[head];
    if (du == radius) continue;
    for (NodeId v : g.neighbors(u)) {
      if (!g.alive(v) || visited(v)) continue;
      seen.push_back(v);
      out.push_back({v, du + 1});
    }
  }
  return out;
}

Graph generate_regular(int n, int d, std::uint64_t seed, int max_restarts) {
  if (d < 0 || n <= d || (static_cast<long long>(n) * d) % 2 != 0)
    throw InfeasibleError(fmt::format("no simple {}-regular graph on {} nodes", d, n));
  std::mt19937_64 rng(seed);
  std::vector<NodeId> stubs(static_cast<std::size_t>(n) * d);
  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    for (std::size_t k = 0; k < stubs.size(); ++k) stubs[k] = static_cast<NodeId>(k / d);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    Graph g(n);
    bool simple = true;
    for (std::size_t k = 0; k < stubs.size() && simple; k += 2) {
      const NodeId u = stubs[k], v = stubs[k + 1];
      if (u == v || g.has_edge(u, v))
        simple = false;
      else
        g.add_edge(u, v);
    }
    if (simple) return g;
  }
  throw CapacityError(fmt::format(
      "configuration model: {} consecutive non-simple pairings for n={}, d={}",
      max_restarts, n, d));
}

bool is_independent(const Graph& original, std::span<const NodeId> set) {
  std::vector<std::uint8_t> in(original.node_count(), 0);
  for (NodeId v : set) {
    if (!original.valid(v)) return false;
    in[v] = 1;
  }
  for (NodeId v : set)
    for (NodeId w : original.neighbors(v))
      if (in[w]) return false;
  return true;
}

Graph read_edge_list(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0)
    throw FormatError("edge list: expected header \"N M\"");
  Graph g(static_cast<int>(n));
  for (long long k = 0; k < m; ++k) {
    long long u, v;
    if (!(in >> u >> v))
      throw FormatError(fmt::format("edge list: expected {} edges, got {}", m, k));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw FormatError(fmt::format("edge list: edge ({}, {}) out of range", u, v));
    if (u == v) throw FormatError(fmt::format("edge list: self-loop at {}", u));
    if (g.has_edge(static_cast<NodeId>(u), static_cast<NodeId>(v)))
      throw FormatError(fmt::format("edge list: duplicate edge ({}, {})", u, v));
    g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  std::string trailing;
  if (in >> trailing) throw FormatError("edge list: trailing data after last edge");
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto es = g.edges();
  out << g.node_count() << ' ' << es.size() << '\n';
  for (const auto& [u, v] : es) out << u << ' ' << v << '\n';
}

}  // namespace qgreedy
