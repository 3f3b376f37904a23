#include "qgreedy/ising.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace qgreedy {

IsingParams::IsingParams(double lambda) : lambda_(lambda) {
  if (!(lambda >= 1.0))
    throw std::invalid_argument(fmt::format("penalty lambda must be >= 1, got {}", lambda));
}

namespace {

void check_length(const Graph& g, std::size_t length) {
  if (length != static_cast<std::size_t>(g.node_count()))
    throw std::invalid_argument(
        fmt::format("assignment has {} entries for {} nodes", length, g.node_count()));
}

}  // namespace

double energy(const Graph& g, const IsingParams& params, std::span<const std::uint8_t> occupation) {
  check_length(g, occupation.size());
  long long violated = 0, occupied = 0;
  for (const auto& [u, v] : g.edges())
    if (occupation[u] && occupation[v]) ++violated;
  for (NodeId i = 0; i < g.node_count(); ++i)
    if (g.alive(i) && occupation[i]) ++occupied;
  return params.lambda() * static_cast<double>(violated) - static_cast<double>(occupied);
}

double energy_pauli(const Graph& g, const IsingParams& params, std::span<const std::int8_t> spins) {
  check_length(g, spins.size());
  double e = 0.0;
  for (const auto& [u, v] : g.edges()) e += params.coupling() * spins[u] * spins[v];
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (!g.alive(i)) continue;
    e += params.field(g.degree(i)) * spins[i] + params.constant(g.degree(i));
  }
  return e;
}

}  // namespace qgreedy
