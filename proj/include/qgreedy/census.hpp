#pragma once

#include <vector>

#include "qgreedy/canonical.hpp"
#include "qgreedy/lightcone.hpp"

namespace qgreedy {

struct CensusReport {
  int depth = 0;
  long long total = 0;
  long long trees = 0;
  long long non_trees = 0;
};

struct Census {
  CensusReport report;
  std::vector<LightCone> cones;    // sorted by canonical key
  std::vector<CanonicalKey> keys;  // parallel to cones
};

/// All rooted cones up to isomorphism: connected, max degree <= d, every
/// vertex within distance p of the root, no edge between two distance-p
/// vertices. Cones are grown one shell at a time (edges inside the current
/// outer shell, then new vertices attached to nonempty subsets of it) and
/// deduplicated by canonical key after every shell.
///
/// Supports d = 3 and p in {1, 2, 3}; p = 3 is a long run (tens of
/// thousands of cones from millions of candidates). Throws InfeasibleError
/// otherwise.
Census enumerate_cones(int p, int d = 3);

}  // namespace qgreedy
