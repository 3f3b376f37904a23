#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <vector>

#include <fmt/format.h>

#include "qgreedy/engines.hpp"

namespace qgreedy {

namespace {

using Amplitude = std::complex<double>;

// Basis history of one qubit across the circuit. With m mixers the index
// packs forward slices x_0..x_{m-1} (bits 0..m-1), the shared final value
// (bit m) and backward slices y_0..y_{m-1} (bits m+1..2m).
struct History {
  std::vector<double> betas;
  std::vector<std::pair<int, double>> fields;  // (slice, angle)
  bool observed = false;

  int mixers() const { return static_cast<int>(betas.size()); }
  int bits() const { return 2 * mixers() + 1; }
  int forward_bit(int slice) const { return slice < mixers() ? slice : mixers(); }
  int backward_bit(int slice) const { return slice < mixers() ? mixers() + 1 + slice : mixers(); }
};

struct Coupling {
  int slice_a;
  int slice_b;
  double angle;
};

struct Network {
  std::vector<History> qubits;
  std::map<std::pair<int, int>, std::vector<Coupling>> couplings;  // a < b
};

Network build_network(const ConeCircuit& circ) {
  Network net;
  net.qubits.resize(circ.qubits);
  for (int q : circ.observed) net.qubits[q].observed = true;
  std::vector<int> slice(circ.qubits, 0);
  for (const auto& layer : circ.layers)
    for (const auto& g : layer) switch (g.kind) {
        case GateKind::x:
          net.qubits[g.a].betas.push_back(g.angle);
          ++slice[g.a];
          break;
        case GateKind::z:
          net.qubits[g.a].fields.emplace_back(slice[g.a], g.angle);
          break;
        case GateKind::zz: {
          int a = g.a, b = g.b;
          if (a > b) std::swap(a, b);
          net.couplings[{a, b}].push_back({slice[a], slice[b], g.angle});
          break;
        }
      }
  return net;
}

inline double spin(std::size_t index, int bit) { return ((index >> bit) & 1U) ? -1.0 : 1.0; }

inline Amplitude mixer_element(double beta, double out, double in) {
  return out == in ? Amplitude(std::cos(beta), 0.0) : Amplitude(0.0, -std::sin(beta));
}

struct Factor {
  std::vector<int> vars;  // sorted
  std::vector<int> bits;  // per var
  std::vector<Amplitude> data;
};

Factor vertex_factor(int q, const History& h) {
  const int m = h.mixers();
  Factor f{{q}, {h.bits()}, std::vector<Amplitude>(std::size_t{1} << h.bits())};
  for (std::size_t idx = 0; idx < f.data.size(); ++idx) {
    Amplitude amp(0.5, 0.0);  // <+|x_0> <y_0|+>
    for (int s = 0; s < m; ++s) {
      amp *= mixer_element(h.betas[s], spin(idx, h.forward_bit(s + 1)), spin(idx, h.forward_bit(s))) *
             std::conj(mixer_element(h.betas[s], spin(idx, h.backward_bit(s + 1)), spin(idx, h.backward_bit(s))));
    }
    double angle = 0.0;
    for (const auto& [s, theta] : h.fields)
      angle -= theta * (spin(idx, h.forward_bit(s)) - spin(idx, h.backward_bit(s)));
    amp *= std::polar(1.0, angle);
    if (h.observed) amp *= spin(idx, m);
    f.data[idx] = amp;
  }
  return f;
}

Factor edge_factor(int a, int b, const History& ha, const History& hb, const std::vector<Coupling>& cs) {
  Factor f{{a, b}, {ha.bits(), hb.bits()}, std::vector<Amplitude>(std::size_t{1} << (ha.bits() + hb.bits()))};
  for (std::size_t idx = 0; idx < f.data.size(); ++idx) {
    const std::size_t ia = idx & ((std::size_t{1} << ha.bits()) - 1);
    const std::size_t ib = idx >> ha.bits();
    double angle = 0.0;
    for (const auto& c : cs) {
      const double fwd = spin(ia, ha.forward_bit(c.slice_a)) * spin(ib, hb.forward_bit(c.slice_b));
      const double bwd = spin(ia, ha.backward_bit(c.slice_a)) * spin(ib, hb.backward_bit(c.slice_b));
      angle -= c.angle * (fwd - bwd);
    }
    f.data[idx] = std::polar(1.0, angle);
  }
  return f;
}

ContractionPlan plan_for(const Network& net) {
  const int n = static_cast<int>(net.qubits.size());
  std::vector<std::set<int>> nbr(n);
  for (const auto& [pair, cs] : net.couplings) {
    nbr[pair.first].insert(pair.second);
    nbr[pair.second].insert(pair.first);
  }
  std::vector<char> gone(n, 0);
  ContractionPlan plan;
  for (int step = 0; step < n; ++step) {
    int pick = -1, pick_bits = 0;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      int bits = net.qubits[v].bits();
      for (int u : nbr[v]) bits += net.qubits[u].bits();
      if (pick < 0 || bits < pick_bits) {
        pick = v;
        pick_bits = bits;
      }
    }
    plan.order.push_back(pick);
    plan.peak_bits = std::max(plan.peak_bits, pick_bits);
    plan.cost += std::ldexp(1.0, pick_bits);
    gone[pick] = 1;
    for (int u : nbr[pick]) {
      nbr[u].erase(pick);
      for (int w : nbr[pick])
        if (w != u) nbr[u].insert(w);
    }
    nbr[pick].clear();
  }
  return plan;
}

// Multiplies every factor that mentions `var` and sums `var` out.
Factor eliminate(std::vector<Factor>& factors, int var, int var_bits) {
  std::vector<Factor> touched;
  std::vector<Factor> rest;
  for (auto& f : factors) {
    if (std::binary_search(f.vars.begin(), f.vars.end(), var))
      touched.push_back(std::move(f));
    else
      rest.push_back(std::move(f));
  }
  factors = std::move(rest);

  Factor out;
  std::map<int, int> bits_of;
  for (const auto& f : touched)
    for (std::size_t k = 0; k < f.vars.size(); ++k)
      if (f.vars[k] != var) bits_of[f.vars[k]] = f.bits[k];
  std::map<int, int> offset_in_out;
  int out_bits = 0;
  for (const auto& [v, b] : bits_of) {
    out.vars.push_back(v);
    out.bits.push_back(b);
    offset_in_out[v] = out_bits;
    out_bits += b;
  }
  out.data.assign(std::size_t{1} << out_bits, Amplitude(0.0, 0.0));

  // per factor: (offset in output, width, offset in factor) for shared vars,
  // plus the offset of `var` inside the factor
  struct Slot {
    int out_offset, width, factor_offset;
  };
  std::vector<std::vector<Slot>> slots(touched.size());
  std::vector<int> var_offset(touched.size(), 0);
  for (std::size_t t = 0; t < touched.size(); ++t) {
    int off = 0;
    for (std::size_t k = 0; k < touched[t].vars.size(); ++k) {
      const int v = touched[t].vars[k];
      if (v == var)
        var_offset[t] = off;
      else
        slots[t].push_back({offset_in_out[v], touched[t].bits[k], off});
      off += touched[t].bits[k];
    }
  }

  const std::size_t var_dim = std::size_t{1} << var_bits;
  std::vector<std::size_t> base(touched.size());
  for (std::size_t o = 0; o < out.data.size(); ++o) {
    for (std::size_t t = 0; t < touched.size(); ++t) {
      std::size_t idx = 0;
      for (const auto& s : slots[t])
        idx |= ((o >> s.out_offset) & ((std::size_t{1} << s.width) - 1)) << s.factor_offset;
      base[t] = idx;
    }
    Amplitude acc(0.0, 0.0);
    for (std::size_t x = 0; x < var_dim; ++x) {
      Amplitude prod(1.0, 0.0);
      for (std::size_t t = 0; t < touched.size(); ++t) prod *= touched[t].data[base[t] | (x << var_offset[t])];
      acc += prod;
    }
    out.data[o] = acc;
  }
  return out;
}

}  // namespace

ContractionPlan plan_contraction(const ConeCircuit& circ) { return plan_for(build_network(circ)); }

double expectation_contract(const ConeCircuit& circ, std::size_t max_entries) {
  const Network net = build_network(circ);
  const ContractionPlan plan = plan_for(net);
  if (plan.peak_bits >= 63 || (std::size_t{1} << plan.peak_bits) > max_entries)
    throw ContractionBudgetError(
        fmt::format("contraction: best greedy order needs a 2^{} tensor, budget is {} entries",
                    plan.peak_bits, max_entries),
        plan.peak_bits);

  std::vector<Factor> factors;
  for (int q = 0; q < circ.qubits; ++q) factors.push_back(vertex_factor(q, net.qubits[q]));
  for (const auto& [pair, cs] : net.couplings)
    factors.push_back(edge_factor(pair.first, pair.second, net.qubits[pair.first], net.qubits[pair.second], cs));

  Amplitude scalar(1.0, 0.0);
  for (int v : plan.order) {
    Factor f = eliminate(factors, v, net.qubits[v].bits());
    if (f.vars.empty())
      scalar *= f.data[0];
    else
      factors.push_back(std::move(f));
  }
  for (const auto& f : factors) scalar *= f.data[0];
  return scalar.real();
}

}  // namespace qgreedy
