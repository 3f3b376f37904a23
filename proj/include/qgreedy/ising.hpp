#pragma once

#include <cstdint>
#include <span>

#include "qgreedy/graph.hpp"

namespace qgreedy {

/// Penalty weight of the MIS Ising encoding
///   H = lambda * sum_{ij in E} N_i N_j - sum_i N_i,   N_i = (Z_i + 1) / 2,
/// and the coefficients of its Pauli-Z form. Fields depend on the current
/// alive degree, so they are computed on demand and never stored.
class IsingParams {
 public:
  /// Throws std::invalid_argument unless lambda >= 1 (MIS must be the ground state).
  explicit IsingParams(double lambda = 1.0);

  double lambda() const { return lambda_; }
  double coupling() const { return lambda_ / 4.0; }
  double field(int degree) const { return (lambda_ * degree - 2.0) / 4.0; }
  double constant(int degree) const { return (lambda_ * degree - 4.0) / 8.0; }

 private:
  double lambda_;
};

/// Energy of a 0/1 occupation vector indexed by node id (dead nodes ignored):
/// lambda * #(alive edges with both ends set) - #(alive nodes set).
double energy(const Graph& g, const IsingParams& params, std::span<const std::uint8_t> occupation);

/// Same energy from Z eigenvalues s_i in {-1, +1}, evaluated term by term in
/// the Pauli form (couplings, fields, constant). Agrees with energy() under
/// s_i = 2 z_i - 1.
double energy_pauli(const Graph& g, const IsingParams& params, std::span<const std::int8_t> spins);

}  // namespace qgreedy
