#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qgreedy/lightcone.hpp"

namespace qgreedy {

/// Fixed QAOA parameters for one (depth, degree, lambda) triple.
struct AngleSchedule {
  int depth = 0;
  int degree = 3;
  double lambda = 1.0;
  std::vector<double> gammas;
  std::vector<double> betas;
  /// Tree energy density reached by the optimizer; NaN if unknown.
  double energy = std::numeric_limits<double>::quiet_NaN();

  /// Throws std::invalid_argument on length mismatch or non-finite angles.
  void validate() const;
};

// Text format: "p=", "d=", "lambda=", "energy=" header lines, then
// "gamma g1 ... gp" and "beta b1 ... bp"; '#' lines are comments.
void write_angles(std::ostream& out, const AngleSchedule& a, const std::vector<std::string>& comments = {});
AngleSchedule read_angles(std::istream& in);
AngleSchedule load_angles(const std::string& path);
void save_angles(const std::string& path, const AngleSchedule& a, const std::vector<std::string>& comments = {});

enum class GateKind : std::uint8_t { zz, z, x };

/// exp(-i * angle * P) with P = Z_a Z_b, Z_a or X_a.
struct Gate {
  GateKind kind;
  int a;
  int b;  // second qubit of a ZZ gate, -1 otherwise
  double angle;
};

/// QAOA circuit restricted to a cone. Within every layer all phase gates
/// precede the mixers.
struct ConeCircuit {
  int qubits = 0;
  std::vector<int> observed;  // product of Z on these qubits is measured
  std::vector<std::vector<Gate>> layers;

  std::size_t gate_count() const;
  std::size_t count(GateKind kind) const;
};

/// Depth-p circuit e^{-i b_p B} e^{-i g_p H} ... |+> for the cone, with
/// H = lambda/4 sum_{causal edges} ZZ + sum_v h_v Z_v and
/// h_v = (lambda * in-cone degree - 2) / 4.
///
/// With `prune_layers`, layer j (1-based) keeps mixers and fields on
/// vertices at distance <= p - j and couplings with an endpoint at distance
/// <= p - j; everything dropped commutes past the measurement.
/// Throws std::invalid_argument if the depths differ.
ConeCircuit build_circuit(const LightCone& c, const AngleSchedule& a, bool prune_layers = true);

}  // namespace qgreedy
