#include "qgreedy/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qgreedy/errors.hpp"

namespace qgreedy {

namespace {

using Adjacency = std::vector<std::vector<int>>;

// Replaces colors by the rank of (color, sorted neighbor colors) until the
// number of classes stops growing. Ranks only depend on the colored graph,
// never on vertex ids, so the result is isomorphism invariant.
int refine(const Adjacency& adj, std::vector<int>& color) {
  const int n = static_cast<int>(color.size());
  std::vector<std::vector<int>> sig(n);
  std::vector<int> order(n);
  int classes = -1;
  for (;;) {
    for (int v = 0; v < n; ++v) {
      auto& s = sig[v];
      s.clear();
      s.push_back(color[v]);
      for (int w : adj[v]) s.push_back(color[w]);
      std::sort(s.begin() + 1, s.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    int rank = 0;
    for (int k = 0; k < n; ++k) {
      if (k > 0 && sig[order[k]] != sig[order[k - 1]]) ++rank;
      color[order[k]] = rank;
    }
    const int now = n == 0 ? 0 : rank + 1;
    if (now == classes) return classes;
    classes = now;
  }
}

// Individualize-and-refine search for the smallest leaf certificate, with
// the two classic prunings: children in one orbit of the automorphisms found
// so far (fixing the current path) are explored once, and a leaf equivalent
// to the first leaf abandons the subtree back to the divergence level.
class Canonizer {
 public:
  Canonizer(const Adjacency& adj, const std::vector<int>& seed_color)
      : adj_(adj), n_(static_cast<int>(adj.size())) {
    std::vector<int> color = seed_color;
    std::vector<int> path;
    search(color, path);
  }

  const std::vector<int>& best_position() const { return best_pos_; }

 private:
  using Certificate = std::vector<std::uint32_t>;

  static constexpr int kNoJump = -1;

  int search(std::vector<int>& color, std::vector<int>& path) {
    const int classes = refine(adj_, color);
    if (classes == n_) return leaf(color, path);

    // first smallest non-singleton cell
    std::vector<int> cell_size(classes, 0);
    for (int c : color) ++cell_size[c];
    int target = -1;
    for (int c = 0; c < classes; ++c)
      if (cell_size[c] > 1 && (target < 0 || cell_size[c] < cell_size[target])) target = c;
    std::vector<int> cell;
    for (int v = 0; v < n_; ++v)
      if (color[v] == target) cell.push_back(v);

    std::vector<int> explored;
    const int level = static_cast<int>(path.size());
    for (int w : cell) {
      if (in_explored_orbit(w, explored, path)) continue;
      std::vector<int> child(n_);
      for (int v = 0; v < n_; ++v) child[v] = 2 * color[v] + (v == w ? 0 : 1);
      path.push_back(w);
      const int jump = search(child, path);
      path.pop_back();
      explored.push_back(w);
      if (jump != kNoJump && jump < level) return jump;
    }
    return kNoJump;
  }

  int leaf(const std::vector<int>& pos, const std::vector<int>& path) {
    Certificate cert;
    cert.reserve(adj_.size() * 2);
    for (int v = 0; v < n_; ++v)
      for (int w : adj_[v])
        if (v < w) {
          const auto a = static_cast<std::uint32_t>(std::min(pos[v], pos[w]));
          const auto b = static_cast<std::uint32_t>(std::max(pos[v], pos[w]));
          cert.push_back(a * static_cast<std::uint32_t>(n_) + b);
        }
    std::sort(cert.begin(), cert.end());
    if (first_pos_.empty()) {
      first_pos_ = pos;
      first_cert_ = cert;
      first_path_ = path;
      best_pos_ = pos;
      best_cert_ = cert;
      return kNoJump;
    }
    if (cert == first_cert_) {
      record_automorphism(first_pos_, pos);
      int common = 0;
      while (common < static_cast<int>(path.size()) && common < static_cast<int>(first_path_.size()) &&
             path[common] == first_path_[common])
        ++common;
      return common;
    }
    if (cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_pos_ = pos;
    } else if (cert == best_cert_) {
      record_automorphism(best_pos_, pos);
    }
    return kNoJump;
  }

  // pos_a and pos_b yield identical labeled graphs, so v -> pos_a^{-1}(pos_b(v))
  // is an automorphism.
  void record_automorphism(const std::vector<int>& pos_a, const std::vector<int>& pos_b) {
    std::vector<int> inverse_a(n_);
    for (int v = 0; v < n_; ++v) inverse_a[pos_a[v]] = v;
    std::vector<int> gamma(n_);
    for (int v = 0; v < n_; ++v) gamma[v] = inverse_a[pos_b[v]];
    automorphisms_.push_back(std::move(gamma));
  }

  bool in_explored_orbit(int w, const std::vector<int>& explored, const std::vector<int>& path) const {
    if (explored.empty() || automorphisms_.empty()) return false;
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& gamma : automorphisms_) {
      bool fixes_path = true;
      for (int v : path)
        if (gamma[v] != v) {
          fixes_path = false;
          break;
        }
      if (!fixes_path) continue;
      for (int v = 0; v < n_; ++v) parent[find(v)] = find(gamma[v]);
    }
    const int rw = find(w);
    for (int u : explored)
      if (find(u) == rw) return true;
    return false;
  }

  const Adjacency& adj_;
  int n_;
  std::vector<int> first_pos_, best_pos_, first_path_;
  Certificate first_cert_, best_cert_;
  std::vector<std::vector<int>> automorphisms_;
};

void put_u16(std::string& out, int value) {
  out.push_back(static_cast<char>(value & 0xff));
  out.push_back(static_cast<char>((value >> 8) & 0xff));
}

}  // namespace

std::vector<int> canonical_labeling(const LightCone& c) {
  const int n = c.size();
  const auto adj = c.adjacency();
  const auto deg = c.degrees();
  // seed colors: (distance, degree); roots are exactly the distance-0 class
  std::vector<int> seed(n);
  for (int v = 0; v < n; ++v) seed[v] = c.dist[v] * (n + 1) + deg[v];
  return Canonizer(adj, seed).best_position();
}

CanonicalKey canonical_key(const LightCone& c) {
  const int n = c.size();
  if (n > 0xffff || c.depth > 0xff || c.roots > 0xff)
    throw CapacityError("cone too large for a canonical key");
  const auto pos = canonical_labeling(c);
  std::vector<int> dist_at(n);
  for (int v = 0; v < n; ++v) dist_at[pos[v]] = c.dist[v];
  std::vector<std::pair<int, int>> edges;
  edges.reserve(c.edges.size());
  for (const auto& [u, v] : c.edges) edges.emplace_back(std::min(pos[u], pos[v]), std::max(pos[u], pos[v]));
  std::sort(edges.begin(), edges.end());

  std::string bytes;
  bytes.reserve(6 + n + 4 * edges.size());
  bytes.push_back(static_cast<char>(c.depth));
  bytes.push_back(static_cast<char>(c.roots));
  put_u16(bytes, n);
  put_u16(bytes, static_cast<int>(edges.size()));
  for (int d : dist_at) bytes.push_back(static_cast<char>(d));
  for (const auto& [a, b] : edges) {
    put_u16(bytes, a);
    put_u16(bytes, b);
  }
  return CanonicalKey(std::move(bytes), n, static_cast<int>(edges.size()), c.is_tree());
}

std::string CanonicalKey::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char b : bytes_) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

CanonicalKey key_from_hex(std::string_view hex) {
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    throw FormatError("canonical key: not lowercase hex");
  };
  if (hex.size() % 2 != 0 || hex.size() < 12) throw FormatError("canonical key: bad length");
  std::string bytes;
  for (std::size_t k = 0; k < hex.size(); k += 2)
    bytes.push_back(static_cast<char>(nibble(hex[k]) * 16 + nibble(hex[k + 1])));
  auto u16 = [&](std::size_t at) {
    return static_cast<unsigned char>(bytes[at]) | (static_cast<unsigned char>(bytes[at + 1]) << 8);
  };
  const int n = u16(2), m = u16(4);
  if (bytes.size() != 6 + static_cast<std::size_t>(n) + 4 * static_cast<std::size_t>(m))
    throw FormatError("canonical key: length does not match header");
  // a connected cone is a tree iff it has n-1 edges
  return CanonicalKey(std::move(bytes), n, m, m + 1 == n);
}

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace qgreedy
