#pragma once

#include <cstdint>

#include "qgreedy/circuit.hpp"
#include "qgreedy/expectation.hpp"

namespace qgreedy {

/// Energy per vertex of the depth-p QAOA state on the infinite d-regular
/// tree:  (d/2)(lambda/4) <ZZ>_edge + h <Z>_vertex + (lambda d - 4)/8,
/// with h = (lambda d - 2)/4, both correlators taken on bulk tree cones.
double tree_energy(const AngleSchedule& a);

struct OptimizerSettings {
  int restarts = 8;          // random starts in [-pi/2, pi/2]^(2p)
  std::uint64_t seed = 1;
  bool warm_start = true;    // also start from the depth-(p-1) optimum padded with zeros
  int max_iterations = 20000;
  double tolerance = 1e-9;   // simplex size at convergence
};

/// Minimizes tree_energy over (gammas, betas) with Nelder-Mead from several
/// starts and returns the best schedule, energy filled in. Betas are wrapped
/// into [-pi/2, pi/2) (period pi up to a global phase); gammas are left free.
/// `previous`, when given, is used as the depth-(p-1) warm start instead of
/// optimizing that depth first.
AngleSchedule optimize_tree_angles(int p, int d, double lambda, const OptimizerSettings& settings = {},
                                   const AngleSchedule* previous = nullptr);

/// Smallest nonzero change of <Z_root> caused by adding a single edge to the
/// depth-p 3-regular tree cone with one outer leaf removed (the full tree
/// has no free degree left). Used as the default degeneracy cutoff for
/// noisy advice.
double single_edge_cutoff(const AngleSchedule& a, const EngineOptions& opts = {});

}  // namespace qgreedy
