#include <cmath>
#include <complex>
#include <vector>

#include <fmt/format.h>

#include "qgreedy/engines.hpp"

namespace qgreedy {

double expectation_p1_analytic(int degree, double field, double gamma, double beta, double lambda) {
  return std::sin(2.0 * beta) * std::sin(2.0 * gamma * field) *
         std::pow(std::cos(gamma * lambda / 2.0), degree);
}

namespace {

using Amplitude = std::complex<double>;

void flush_phases(std::vector<Amplitude>& psi, std::vector<double>& phase, bool& pending) {
  if (!pending) return;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] *= std::polar(1.0, phase[i]);
    phase[i] = 0.0;
  }
  pending = false;
}

// Z eigenvalue of qubit q in basis state i: +1 for bit 0.
inline double sign_of(std::size_t i, int q) { return ((i >> q) & 1U) ? -1.0 : 1.0; }

}  // namespace

double expectation_statevector(const ConeCircuit& circ, int max_qubits) {
  const int n = circ.qubits;
  if (n > max_qubits)
    throw CapacityError(fmt::format("statevector: {} qubits exceed the cap of {}", n, max_qubits));
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Amplitude> psi(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  std::vector<double> phase(dim, 0.0);
  bool pending = false;

  for (const auto& layer : circ.layers) {
    for (const auto& g : layer) {
      switch (g.kind) {
        case GateKind::zz: {
          const std::size_t mask = (std::size_t{1} << g.a) | (std::size_t{1} << g.b);
          for (std::size_t i = 0; i < dim; ++i) {
            const bool odd = __builtin_popcountll(i & mask) & 1;
            phase[i] -= odd ? -g.angle : g.angle;
          }
          pending = true;
          break;
        }
        case GateKind::z:
          for (std::size_t i = 0; i < dim; ++i) phase[i] -= g.angle * sign_of(i, g.a);
          pending = true;
          break;
        case GateKind::x: {
          flush_phases(psi, phase, pending);
          const double c = std::cos(g.angle), s = std::sin(g.angle);
          const Amplitude mis(0.0, -s);
          const std::size_t bit = std::size_t{1} << g.a;
          for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const Amplitude a0 = psi[i], a1 = psi[i | bit];
            psi[i] = c * a0 + mis * a1;
            psi[i | bit] = mis * a0 + c * a1;
          }
          break;
        }
      }
    }
  }
  // trailing phases are diagonal and do not change |psi|^2
  double value = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 1.0;
    for (int q : circ.observed) s *= sign_of(i, q);
    value += std::norm(psi[i]) * s;
  }
  return value;
}

}  // namespace qgreedy
