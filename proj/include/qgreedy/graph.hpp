#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace qgreedy {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;
/// Ordered list of distinct node ids.
using NodeSet = std::vector<NodeId>;

/// Undirected simple graph with an alive mask.
///
/// Deleting a node only clears its alive flag, so ids stay stable for the
/// lifetime of the graph. Degrees and the edge count always refer to the
/// subgraph induced by alive nodes.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int node_count);

  /// Throws std::invalid_argument on self-loops, duplicates or bad ids.
  static Graph from_edges(int node_count, std::span<const Edge> edges);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  int alive_count() const { return alive_count_; }
  int edge_count() const { return edge_count_; }
  bool empty() const { return alive_count_ == 0; }

  bool alive(NodeId i) const { return alive_[i] != 0; }
  bool valid(NodeId i) const { return i >= 0 && i < node_count(); }
  /// Number of alive neighbors of an alive node.
  int degree(NodeId i) const { return degree_[i]; }
  /// All neighbors, dead ones included; filter with alive().
  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_[i]; }

  bool has_edge(NodeId u, NodeId v) const;
  void add_edge(NodeId u, NodeId v);

  /// Kills i and its alive neighbors; returns them with i first.
  NodeSet remove_closed_neighborhood(NodeId i);

  NodeSet alive_nodes() const;
  /// Alive edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;
  int max_degree() const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::uint8_t> alive_;
  std::vector<int> degree_;
  int alive_count_ = 0;
  int edge_count_ = 0;
};

/// Node reached by a breadth-first search, with its hop distance.
struct BallEntry {
  NodeId node;
  int dist;
};

/// All alive nodes within `radius` hops of i over alive nodes, in BFS order
/// (i first, distance non-decreasing, ties by adjacency order).
std::vector<BallEntry> ball(const Graph& g, NodeId i, int radius);

/// Uniform random simple d-regular graph from the configuration model.
///
/// Any self-loop or repeated edge rejects the whole pairing. Throws
/// InfeasibleError if n*d is odd or n <= d, CapacityError when
/// `max_restarts` pairings in a row were rejected.
Graph generate_regular(int n, int d, std::uint64_t seed, int max_restarts = 100000);

/// True iff no edge of `original` has both endpoints in `set`.
bool is_independent(const Graph& original, std::span<const NodeId> set);

// Edge-list text: "N M" then M lines "u v".
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace qgreedy
