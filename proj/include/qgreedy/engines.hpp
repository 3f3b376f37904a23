#pragma once

#include <cstddef>
#include <vector>

#include "qgreedy/circuit.hpp"
#include "qgreedy/errors.hpp"

namespace qgreedy {

/// Closed-form p=1 value of <Z_i> for a vertex with `degree` neighbors and
/// field h: sin(2b) sin(2g h) cos(g lambda / 2)^degree. The cosine argument
/// is 2g times the coupling lambda/4.
double expectation_p1_analytic(int degree, double field, double gamma, double beta, double lambda);

/// Dense simulation from |+...+>; throws CapacityError above `max_qubits`.
double expectation_statevector(const ConeCircuit& circ, int max_qubits = 24);

/// Raised when the cheapest contraction order found still needs an
/// intermediate tensor larger than the budget.
class ContractionBudgetError : public CapacityError {
 public:
  ContractionBudgetError(const std::string& what, int width_bits)
      : CapacityError(what), width_bits_(width_bits) {}
  /// log2 of the largest tensor touched, a treewidth-like cost estimate.
  int width_bits() const { return width_bits_; }

 private:
  int width_bits_;
};

struct ContractionPlan {
  std::vector<int> order;   // qubits in elimination order
  int peak_bits = 0;        // log2 entries of the largest product tensor
  double cost = 0.0;        // sum of product tensor sizes
};

/// Greedy elimination order: repeatedly drop the qubit whose product tensor
/// is smallest, ties broken by the lower qubit id. On tree cones this
/// eliminates leaves first, so tensors stay at O(p) qubit-time indices.
ContractionPlan plan_contraction(const ConeCircuit& circ);

/// Tensor-network value of the observable. Each qubit becomes one index
/// over its computational-basis history (forward slices, shared final
/// value, backward slices: 2m+1 bits for m mixers), phase gates become
/// vertex/edge tensors. Throws ContractionBudgetError if the plan needs a
/// tensor with more than `max_entries` entries.
double expectation_contract(const ConeCircuit& circ, std::size_t max_entries = std::size_t{1} << 26);

}  // namespace qgreedy
