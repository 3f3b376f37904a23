#include "qgreedy/circuit.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qgreedy/errors.hpp"

namespace qgreedy {

void AngleSchedule::validate() const {
  if (depth < 1) throw std::invalid_argument("angle schedule: depth must be >= 1");
  if (static_cast<int>(gammas.size()) != depth || static_cast<int>(betas.size()) != depth)
    throw std::invalid_argument(fmt::format("angle schedule: expected {} gammas and betas, got {} and {}",
                                            depth, gammas.size(), betas.size()));
  for (double x : gammas)
    if (!std::isfinite(x)) throw std::invalid_argument("angle schedule: non-finite gamma");
  for (double x : betas)
    if (!std::isfinite(x)) throw std::invalid_argument("angle schedule: non-finite beta");
}

void write_angles(std::ostream& out, const AngleSchedule& a, const std::vector<std::string>& comments) {
  a.validate();
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "p=" << a.depth << '\n';
  out << "d=" << a.degree << '\n';
  out << fmt::format("lambda={:.17g}\n", a.lambda);
  out << fmt::format("energy={:.17g}\n", a.energy);
  out << "gamma";
  for (double g : a.gammas) out << fmt::format(" {:.17g}", g);
  out << "\nbeta";
  for (double b : a.betas) out << fmt::format(" {:.17g}", b);
  out << '\n';
}

AngleSchedule read_angles(std::istream& in) {
  AngleSchedule a;
  bool have_p = false, have_d = false, have_lambda = false;
  std::string line;
  auto number = [](const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw FormatError(fmt::format("angle file: bad number '{}'", text));
    }
    if (used != text.size()) throw FormatError(fmt::format("angle file: bad number '{}'", text));
    return v;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("p=", 0) == 0) {
      a.depth = static_cast<int>(number(line.substr(2)));
      have_p = true;
    } else if (line.rfind("d=", 0) == 0) {
      a.degree = static_cast<int>(number(line.substr(2)));
      have_d = true;
    } else if (line.rfind("lambda=", 0) == 0) {
      a.lambda = number(line.substr(7));
      have_lambda = true;
    } else if (line.rfind("energy=", 0) == 0) {
      const auto text = line.substr(7);
      a.energy = text == "nan" ? std::numeric_limits<double>::quiet_NaN() : number(text);
    } else {
      std::istringstream fields(line);
      std::string tag, value;
      fields >> tag;
      auto* target = tag == "gamma" ? &a.gammas : tag == "beta" ? &a.betas : nullptr;
      if (!target) throw FormatError(fmt::format("angle file: unexpected line '{}'", line));
      while (fields >> value) target->push_back(number(value));
    }
  }
  if (!have_p || !have_d || !have_lambda) throw FormatError("angle file: missing p=, d= or lambda= header");
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return a;
}

AngleSchedule load_angles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open angle file '{}'", path));
  return read_angles(in);
}

void save_angles(const std::string& path, const AngleSchedule& a, const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write angle file '{}'", path));
  write_angles(out, a, comments);
}

std::size_t ConeCircuit::gate_count() const {
  std::size_t total = 0;
  for (const auto& layer : layers) total += layer.size();
  return total;
}

std::size_t ConeCircuit::count(GateKind kind) const {
  std::size_t total = 0;
  for (const auto& layer : layers)
    for (const auto& g : layer) total += g.kind == kind;
  return total;
}

ConeCircuit build_circuit(const LightCone& c, const AngleSchedule& a, bool prune_layers) {
  a.validate();
  if (a.depth != c.depth)
    throw std::invalid_argument(fmt::format("circuit: schedule depth {} != cone depth {}", a.depth, c.depth));
  const int p = c.depth;
  const double coupling = a.lambda / 4.0;
  const auto deg = c.degrees();

  ConeCircuit circ;
  circ.qubits = c.size();
  for (int r = 0; r < c.roots; ++r) circ.observed.push_back(r);
  circ.layers.resize(p);
  for (int j = 1; j <= p; ++j) {
    auto& layer = circ.layers[j - 1];
    const int reach = prune_layers ? p - j : p;
    for (const auto& [u, v] : c.edges)
      if (std::min(c.dist[u], c.dist[v]) <= reach)
        layer.push_back({GateKind::zz, u, v, a.gammas[j - 1] * coupling});
    for (int v = 0; v < c.size(); ++v)
      if (c.dist[v] <= reach)
        layer.push_back({GateKind::z, v, -1, a.gammas[j - 1] * (a.lambda * deg[v] - 2.0) / 4.0});
    for (int v = 0; v < c.size(); ++v)
      if (c.dist[v] <= reach) layer.push_back({GateKind::x, v, -1, a.betas[j - 1]});
  }
  return circ;
}

}  // namespace qgreedy
