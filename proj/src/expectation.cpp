#include "qgreedy/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fmt/format.h>

namespace qgreedy {

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::automatic: return "auto";
    case Engine::analytic: return "analytic";
    case Engine::statevector: return "statevector";
    case Engine::contraction: return "contraction";
  }
  return "?";
}

Engine engine_from_string(std::string_view name) {
  for (Engine e : {Engine::automatic, Engine::analytic, Engine::statevector, Engine::contraction})
    if (to_string(e) == name) return e;
  throw std::invalid_argument(fmt::format("unknown engine '{}'", name));
}

namespace {

double analytic_value(const LightCone& c, const AngleSchedule& a) {
  if (c.depth != 1 || c.roots != 1)
    throw std::invalid_argument("analytic engine only covers single-root p=1 cones");
  if (a.depth != 1) throw std::invalid_argument("analytic engine needs a p=1 schedule");
  const int d = c.degrees()[0];
  return expectation_p1_analytic(d, (a.lambda * d - 2.0) / 4.0, a.gammas[0], a.betas[0], a.lambda);
}

}  // namespace

double evaluate_cone(const LightCone& c, const AngleSchedule& a, const EngineOptions& opts, Engine* used) {
  auto report = [&](Engine e, double v) {
    if (used) *used = e;
    return v;
  };
  switch (opts.engine) {
    case Engine::analytic:
      return report(Engine::analytic, analytic_value(c, a));
    case Engine::statevector:
      return report(Engine::statevector,
                    expectation_statevector(build_circuit(c, a, opts.prune_layers), opts.statevector_max_qubits));
    case Engine::contraction:
      return report(Engine::contraction,
                    expectation_contract(build_circuit(c, a, opts.prune_layers), opts.contraction_max_entries));
    case Engine::automatic:
      break;
  }
  if (c.depth == 1 && c.roots == 1) return report(Engine::analytic, analytic_value(c, a));
  const ConeCircuit circ = build_circuit(c, a, opts.prune_layers);
  const ContractionPlan plan = plan_contraction(circ);
  const bool fits_budget = plan.peak_bits < 63 && (std::size_t{1} << plan.peak_bits) <= opts.contraction_max_entries;
  const bool fits_statevector = circ.qubits <= opts.statevector_max_qubits;
  const double statevector_work = std::ldexp(static_cast<double>(circ.gate_count() + 1), circ.qubits);
  if (fits_budget && (!fits_statevector || plan.cost <= statevector_work))
    return report(Engine::contraction, expectation_contract(circ, opts.contraction_max_entries));
  if (fits_statevector) return report(Engine::statevector, expectation_statevector(circ, opts.statevector_max_qubits));
  // neither route fits: let the contraction engine raise its budget error
  return report(Engine::contraction, expectation_contract(circ, opts.contraction_max_entries));
}

std::optional<ExpectationRecord> ExpectationStore::find(const CanonicalKey& key) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void ExpectationStore::insert(const ExpectationRecord& record) {
  std::unique_lock lock(mutex_);
  records_.emplace(record.key, record);
}

std::size_t ExpectationStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<ExpectationRecord> ExpectationStore::snapshot() const {
  std::vector<ExpectationRecord> out;
  {
    std::shared_lock lock(mutex_);
    out.reserve(records_.size());
    for (const auto& [key, rec] : records_) out.push_back(rec);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
  return out;
}

}  // namespace qgreedy
