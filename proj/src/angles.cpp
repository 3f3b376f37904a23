#include "qgreedy/angles.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <gsl/gsl_multimin.h>

namespace qgreedy {

double tree_energy(const AngleSchedule& a) {
  a.validate();
  const int d = a.degree;
  EngineOptions opts;
  opts.engine = Engine::contraction;
  const double z = evaluate_cone(tree_cone(a.depth, d), a, opts);
  const double zz = evaluate_cone(tree_edge_cone(a.depth, d), a, opts);
  const double h = (a.lambda * d - 2.0) / 4.0;
  return 0.5 * d * (a.lambda / 4.0) * zz + h * z + (a.lambda * d - 4.0) / 8.0;
}

namespace {

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const { gsl_multimin_fminimizer_free(s); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
using Minimizer = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;
using Vector = std::unique_ptr<gsl_vector, VectorDeleter>;

struct Problem {
  int p;
  int d;
  double lambda;
};

AngleSchedule schedule_from(const Problem& pb, const gsl_vector* x) {
  AngleSchedule a;
  a.depth = pb.p;
  a.degree = pb.d;
  a.lambda = pb.lambda;
  for (int j = 0; j < pb.p; ++j) {
    a.gammas.push_back(gsl_vector_get(x, j));
    a.betas.push_back(gsl_vector_get(x, pb.p + j));
  }
  return a;
}

double objective(const gsl_vector* x, void* params) {
  const auto& pb = *static_cast<const Problem*>(params);
  const double e = tree_energy(schedule_from(pb, x));
  return std::isfinite(e) ? e : std::numeric_limits<double>::max();
}

// One Nelder-Mead descent, restarted from its own optimum until a fresh
// simplex stops improving (guards against early simplex collapse).
std::pair<std::vector<double>, double> descend(Problem pb, std::vector<double> start,
                                               const OptimizerSettings& settings) {
  const std::size_t n = start.size();
  gsl_multimin_function fn{&objective, n, &pb};
  Minimizer s(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  Vector x(gsl_vector_alloc(n)), step(gsl_vector_alloc(n));
  double best = std::numeric_limits<double>::max();
  for (int round = 0; round < 6; ++round) {
    for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x.get(), k, start[k]);
    gsl_vector_set_all(step.get(), round == 0 ? 0.2 : 0.02);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
    for (int it = 0; it < settings.max_iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), settings.tolerance) == GSL_SUCCESS) break;
    }
    const double value = s->fval;
    for (std::size_t k = 0; k < n; ++k) start[k] = gsl_vector_get(s->x, k);
    const bool improved = value < best - 1e-14;
    best = std::min(best, value);
    if (!improved && round > 0) break;
  }
  return {start, best};
}

}  // namespace

AngleSchedule optimize_tree_angles(int p, int d, double lambda, const OptimizerSettings& settings,
                                   const AngleSchedule* previous) {
  if (p < 1) throw std::invalid_argument("optimize_tree_angles: depth must be >= 1");
  if (d < 2) throw std::invalid_argument("optimize_tree_angles: degree must be >= 2");
  const Problem pb{p, d, lambda};
  std::mt19937_64 rng(settings.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);

  std::vector<std::vector<double>> starts;
  if (settings.warm_start && p > 1) {
    if (previous && (previous->depth != p - 1 || previous->degree != d || previous->lambda != lambda))
      throw std::invalid_argument("optimize_tree_angles: warm start must be the depth-(p-1) schedule of the same d, lambda");
    const AngleSchedule prev = previous ? *previous : optimize_tree_angles(p - 1, d, lambda, settings);
    std::vector<double> padded(prev.gammas);
    padded.push_back(0.0);
    padded.insert(padded.end(), prev.betas.begin(), prev.betas.end());
    padded.push_back(0.0);
    starts.push_back(std::move(padded));
  }
  for (int r = 0; r < settings.restarts; ++r) {
    std::vector<double> x(2 * p);
    for (double& v : x) v = angle(rng);
    starts.push_back(std::move(x));
  }
  if (starts.empty()) throw std::invalid_argument("optimize_tree_angles: no starting points");

  std::vector<double> best_x;
  double best = std::numeric_limits<double>::max();
  for (const auto& s : starts) {
    auto [x, value] = descend(pb, s, settings);
    if (value < best) {
      best = value;
      best_x = std::move(x);
    }
  }
  AngleSchedule a;
  a.depth = p;
  a.degree = d;
  a.lambda = lambda;
  for (int j = 0; j < p; ++j) {
    a.gammas.push_back(best_x[j]);
    double beta = std::remainder(best_x[p + j], std::numbers::pi);
    if (beta >= std::numbers::pi / 2) beta -= std::numbers::pi;
    a.betas.push_back(beta);
  }
  a.energy = tree_energy(a);
  return a;
}

double single_edge_cutoff(const AngleSchedule& a, const EngineOptions& opts) {
  a.validate();
  const int p = a.depth;
  constexpr int d = 3;
  const LightCone full = tree_cone(p, d);
  // drop the last outer leaf; its parent regains one free slot
  const int dropped = full.size() - 1;
  std::vector<Edge> edges;
  for (const auto& e : full.edges)
    if (e.first != dropped && e.second != dropped) edges.push_back(e);
  const int n = full.size() - 1;
  const Graph base = Graph::from_edges(n, edges);
  const double reference = evaluate_cone(extract_lightcone(base, 0, p), a, opts);

  double cutoff = std::numeric_limits<double>::infinity();
  auto consider = [&](const Graph& g) {
    const double delta = std::abs(evaluate_cone(extract_lightcone(g, 0, p), a, opts) - reference);
    if (delta > 1e-12) cutoff = std::min(cutoff, delta);
  };
  for (int u = 0; u < n; ++u) {
    if (base.degree(u) >= d) continue;
    if (full.dist[u] < p) {
      Graph g(n + 1);
      for (const auto& [x, y] : edges) g.add_edge(x, y);
      g.add_edge(u, n);
      consider(g);
    }
    for (int v = u + 1; v < n; ++v) {
      if (base.degree(v) >= d || base.has_edge(u, v)) continue;
      if (std::min(full.dist[u], full.dist[v]) > p - 1) continue;  // never inside the cone
      Graph g = base;
      g.add_edge(u, v);
      consider(g);
    }
  }
  if (!std::isfinite(cutoff)) throw std::runtime_error("single_edge_cutoff: no edge changes <Z_root>");
  return cutoff;
}

}  // namespace qgreedy
