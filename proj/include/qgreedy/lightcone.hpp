#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qgreedy/graph.hpp"

namespace qgreedy {

/// Rooted causal cone of a depth-p QAOA observable.
///
/// Vertices carry their hop distance from the root set (local ids
/// [0, roots) are the roots, at distance 0). Only edges with
/// min(dist(u), dist(v)) <= depth - 1 are kept: an edge joining two
/// distance-p vertices never influences the roots.
struct LightCone {
  int depth = 0;
  int roots = 1;
  std::vector<int> dist;
  std::vector<Edge> edges;    // u < v, sorted
  std::vector<NodeId> origin; // graph id per local id; empty for synthetic cones

  int size() const { return static_cast<int>(dist.size()); }
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency() const;
  /// Connected and acyclic.
  bool is_tree() const;
};

/// Cone of the given sources at depth p in the alive part of g. Local ids
/// follow BFS order with the sources first.
LightCone extract_cone(const Graph& g, std::span<const NodeId> sources, int p);

/// Depth-p cone of a single node; the root gets local id 0.
LightCone extract_lightcone(const Graph& g, NodeId i, int p);

/// Survivors of a selection at i must be re-evaluated if they lie in
/// ball(g, i, p + 1); call before deleting i's neighborhood.
NodeSet affected_nodes(const Graph& g, NodeId i, int p);

/// Vertex count of the depth-p d-regular tree, 1 + d((d-1)^p - 1)/(d-2).
long long tree_node_count(int p, int d);

/// Cone of the root of the depth-p d-regular tree.
LightCone tree_cone(int p, int d);
/// Two-root cone around a bulk edge of the d-regular tree.
LightCone tree_edge_cone(int p, int d);

/// Applies a relabeling old -> new (roots must stay in [0, roots)) and re-sorts edges.
LightCone permute_cone(const LightCone& c, std::span<const int> perm);

/// Throws std::invalid_argument if c breaks a structural invariant
/// (distances, causal edges, degree bound).
void validate_cone(const LightCone& c, int max_degree);

// Dump format: "p n m", the n distance labels, then m lines "u v".
void write_cone(std::ostream& out, const LightCone& c);
LightCone read_cone(std::istream& in);

}  // namespace qgreedy
