#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qgreedy/lightcone.hpp"

namespace qgreedy {

/// Labeling-invariant fingerprint of a rooted cone.
///
/// Two cones get the same key iff they have the same depth and root count
/// and a root-preserving isomorphism maps one onto the other. The bytes are
/// the canonical adjacency in a fixed little-endian layout, so keys are
/// stable across runs and platforms.
class CanonicalKey {
 public:
  CanonicalKey() = default;
  CanonicalKey(std::string bytes, int vertices, int edges, bool tree)
      : bytes_(std::move(bytes)), vertices_(vertices), edges_(edges), tree_(tree) {}

  const std::string& bytes() const { return bytes_; }
  std::string hex() const;
  int vertex_count() const { return vertices_; }
  int edge_count() const { return edges_; }
  bool is_tree() const { return tree_; }

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) { return a.bytes_ == b.bytes_; }
  friend std::strong_ordering operator<=>(const CanonicalKey& a, const CanonicalKey& b) {
    return a.bytes_.compare(b.bytes_) <=> 0;
  }

 private:
  std::string bytes_;
  int vertices_ = 0;
  int edges_ = 0;
  bool tree_ = false;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const { return std::hash<std::string>{}(k.bytes()); }
};

/// Canonical position of every local vertex (a permutation fixing no
/// particular vertex except that roots come first).
std::vector<int> canonical_labeling(const LightCone& c);

CanonicalKey canonical_key(const LightCone& c);

/// Parses the hex rendering back into a key.
CanonicalKey key_from_hex(std::string_view hex);

/// 64-bit FNV-1a; used to derive per-key random streams.
std::uint64_t stable_hash(std::string_view bytes);

}  // namespace qgreedy
