#include "qgreedy/lightcone.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "qgreedy/errors.hpp"

namespace qgreedy {

std::vector<int> LightCone::degrees() const {
  std::vector<int> deg(dist.size(), 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::vector<std::vector<int>> LightCone::adjacency() const {
  std::vector<std::vector<int>> adj(dist.size());
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

bool LightCone::is_tree() const {
  if (edges.size() + 1 != dist.size()) return false;
  // n-1 edges and connected <=> tree
  const auto adj = adjacency();
  std::vector<char> seen(dist.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == dist.size();
}

LightCone extract_cone(const Graph& g, std::span<const NodeId> sources, int p) {
  if (p < 1) throw std::invalid_argument(fmt::format("cone depth must be >= 1, got {}", p));
  if (sources.empty()) throw std::invalid_argument("cone needs at least one source");
  LightCone c;
  c.depth = p;
  c.roots = static_cast<int>(sources.size());
  auto local_of = [&](NodeId v) -> int {
    const auto it = std::find(c.origin.begin(), c.origin.end(), v);
    return it == c.origin.end() ? -1 : static_cast<int>(it - c.origin.begin());
  };
  for (NodeId s : sources) {
    if (!g.valid(s)) throw std::out_of_range(fmt::format("node {} out of range", s));
    if (!g.alive(s)) throw std::invalid_argument(fmt::format("node {} is not alive", s));
    if (local_of(s) >= 0) throw std::invalid_argument("duplicate cone source");
    c.origin.push_back(s);
    c.dist.push_back(0);
  }
  for (std::size_t head = 0; head < c.origin.size(); ++head) {
    const int du = c.dist[head];
    if (du == p) continue;
    for (NodeId v : g.neighbors(c.origin[head])) {
      if (!g.alive(v) || local_of(v) >= 0) continue;
      c.origin.push_back(v);
      c.dist.push_back(du + 1);
    }
  }
  for (int a = 0; a < c.size(); ++a) {
    if (c.dist[a] >= p) continue;
    for (NodeId w : g.neighbors(c.origin[a])) {
      if (!g.alive(w)) continue;
      const int b = local_of(w);
      // every alive neighbor of a vertex below depth p is inside the ball
      if (c.dist[b] < p && b < a) continue;  // counted from the other side
      c.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

LightCone extract_lightcone(const Graph& g, NodeId i, int p) {
  const NodeId sources[] = {i};
  return extract_cone(g, sources, p);
}

NodeSet affected_nodes(const Graph& g, NodeId i, int p) {
  NodeSet out;
  for (const auto& e : ball(g, i, p + 1)) out.push_back(e.node);
  return out;
}

long long tree_node_count(int p, int d) {
  if (p < 0 || d < 1) throw std::invalid_argument("tree_node_count: need p >= 0, d >= 1");
  long long total = 1, shell = d;
  for (int k = 1; k <= p; ++k) {
    total += shell;
    shell *= (d - 1);
  }
  return total;
}

namespace {

// Grows (d-1)-ary subtrees below `parent` until depth `remaining` is used up.
void grow(std::vector<Edge>& edges, int& next, int parent, int children, int d, int remaining) {
  if (remaining == 0) return;
  for (int k = 0; k < children; ++k) {
    const int child = next++;
    edges.emplace_back(parent, child);
    grow(edges, next, child, d - 1, d, remaining - 1);
  }
}

LightCone cone_of_tree(int n, std::span<const Edge> edges, std::span<const NodeId> sources, int p) {
  return extract_cone(Graph::from_edges(n, edges), sources, p);
}

}  // namespace

LightCone tree_cone(int p, int d) {
  std::vector<Edge> edges;
  int next = 1;
  grow(edges, next, 0, d, d, p);
  const NodeId root[] = {0};
  return cone_of_tree(next, edges, root, p);
}

LightCone tree_edge_cone(int p, int d) {
  std::vector<Edge> edges{{0, 1}};
  int next = 2;
  grow(edges, next, 0, d - 1, d, p);
  grow(edges, next, 1, d - 1, d, p);
  const NodeId roots[] = {0, 1};
  return cone_of_tree(next, edges, roots, p);
}

LightCone permute_cone(const LightCone& c, std::span<const int> perm) {
  if (perm.size() != c.dist.size()) throw std::invalid_argument("permutation size mismatch");
  for (int r = 0; r < c.roots; ++r)
    if (perm[r] < 0 || perm[r] >= c.roots) throw std::invalid_argument("permutation must keep the roots in front");
  std::vector<char> hit(perm.size(), 0);
  for (int t : perm) {
    if (t < 0 || t >= c.size() || hit[t]) throw std::invalid_argument("not a permutation");
    hit[t] = 1;
  }
  LightCone out = c;
  for (int v = 0; v < c.size(); ++v) out.dist[perm[v]] = c.dist[v];
  if (!c.origin.empty())
    for (int v = 0; v < c.size(); ++v) out.origin[perm[v]] = c.origin[v];
  for (auto& [u, v] : out.edges) {
    u = perm[u];
    v = perm[v];
    if (u > v) std::swap(u, v);
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

void validate_cone(const LightCone& c, int max_degree) {
  const int n = c.size();
  if (c.roots < 1 || c.roots > n) throw std::invalid_argument("cone: bad root count");
  for (int v = 0; v < n; ++v) {
    if ((v < c.roots) != (c.dist[v] == 0)) throw std::invalid_argument("cone: roots must be exactly the distance-0 vertices");
    if (c.dist[v] < 0 || c.dist[v] > c.depth) throw std::invalid_argument("cone: distance out of range");
  }
  std::vector<char> has_parent(n, 0);
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    const auto [u, v] = c.edges[k];
    if (u < 0 || v >= n || u >= v) throw std::invalid_argument("cone: edge ids must satisfy 0 <= u < v < n");
    if (k > 0 && !(c.edges[k - 1] < c.edges[k])) throw std::invalid_argument("cone: edges must be sorted and unique");
    if (std::abs(c.dist[u] - c.dist[v]) > 1) throw std::invalid_argument("cone: edge spans more than one shell");
    if (std::min(c.dist[u], c.dist[v]) > c.depth - 1) throw std::invalid_argument("cone: non-causal edge between outer-shell vertices");
    if (c.dist[u] + 1 == c.dist[v]) has_parent[v] = 1;
    if (c.dist[v] + 1 == c.dist[u]) has_parent[u] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (c.dist[v] > 0 && !has_parent[v]) throw std::invalid_argument("cone: vertex without an edge to the previous shell");
  for (int deg : c.degrees())
    if (deg > max_degree) throw std::invalid_argument("cone: degree bound exceeded");
}

void write_cone(std::ostream& out, const LightCone& c) {
  out << c.depth << ' ' << c.size() << ' ' << c.edges.size() << '\n';
  for (int v = 0; v < c.size(); ++v) out << (v ? " " : "") << c.dist[v];
  out << '\n';
  for (const auto& [u, v] : c.edges) out << u << ' ' << v << '\n';
}

LightCone read_cone(std::istream& in) {
  LightCone c;
  int n = 0, m = 0;
  if (!(in >> c.depth >> n >> m) || n < 1 || m < 0) throw FormatError("cone dump: bad header");
  c.dist.resize(n);
  for (int& d : c.dist)
    if (!(in >> d)) throw FormatError("cone dump: missing distance label");
  c.roots = static_cast<int>(std::count(c.dist.begin(), c.dist.end(), 0));
  c.edges.resize(m);
  for (auto& [u, v] : c.edges) {
    if (!(in >> u >> v)) throw FormatError("cone dump: missing edge");
    if (u > v) std::swap(u, v);
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

}  // namespace qgreedy
