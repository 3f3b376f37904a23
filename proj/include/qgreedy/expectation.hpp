#pragma once

#include <cstddef>
#include <optional>
#include <shared_mutex>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qgreedy/canonical.hpp"
#include "qgreedy/circuit.hpp"
#include "qgreedy/engines.hpp"

namespace qgreedy {

enum class Engine { automatic, analytic, statevector, contraction };

std::string_view to_string(Engine e);
Engine engine_from_string(std::string_view name);

struct EngineOptions {
  Engine engine = Engine::automatic;
  int statevector_max_qubits = 24;
  std::size_t contraction_max_entries = std::size_t{1} << 26;
  bool prune_layers = true;
};

/// Ideal <Z_root> of one canonical cone.
struct ExpectationRecord {
  CanonicalKey key;
  double value = 0.0;
  Engine engine = Engine::automatic;  // engine that produced the value
  int cone_size = 0;
};

/// <Z_root> (or the product over all roots) of a cone under a schedule.
///
/// `automatic` uses the closed form for single-root p=1 cones and otherwise
/// the cheaper of contraction and statevector by estimated work, falling
/// back to the statevector when the contraction budget is exceeded.
double evaluate_cone(const LightCone& c, const AngleSchedule& a, const EngineOptions& opts = {},
                     Engine* used = nullptr);

/// Concurrent cache from canonical keys to ideal values. Values depend on
/// the schedule, so one store must only ever see one schedule per depth.
/// Duplicate inserts of the same key keep the first record.
class ExpectationStore {
 public:
  std::optional<ExpectationRecord> find(const CanonicalKey& key) const;
  void insert(const ExpectationRecord& record);
  std::size_t size() const;
  std::vector<ExpectationRecord> snapshot() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<CanonicalKey, ExpectationRecord, CanonicalKeyHash> records_;
};

}  // namespace qgreedy
