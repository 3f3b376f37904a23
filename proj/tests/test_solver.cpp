#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qgreedy/bench.hpp"
#include "qgreedy/errors.hpp"
#include "qgreedy/solver.hpp"

using namespace qgreedy;

namespace {

Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph petersen() {
  Graph g(10);
  for (int k = 0; k < 5; ++k) {
    g.add_edge(k, (k + 1) % 5);
    g.add_edge(k, k + 5);
    g.add_edge(5 + k, 5 + (k + 2) % 5);
  }
  return g;
}

SolverConfig config(int p) {
  SolverConfig cfg;
  cfg.depth = p;
  cfg.angles = load_angles(
      (std::filesystem::path(QGREEDY_SOURCE_DIR) / "data/angles" / angle_file_name(p, 3, 1.0)).string());
  return cfg;
}

void check_trace(const Graph& g, const SolveTrace& t) {
  CHECK(is_independent(g, t.independent_set));
  int removed = 0;
  for (const auto& s : t.steps) removed += s.removed;
  CHECK(removed == g.node_count());
  CHECK(t.steps.size() == t.independent_set.size());
}

}  // namespace

TEST_CASE("exact solver") {
  CHECK(solve_exact(complete(4)).size() == 1);
  Graph k33(6);
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) k33.add_edge(a, b);
  CHECK(solve_exact(k33).size() == 3);
  CHECK(solve_exact(petersen()).size() == 4);
  CHECK(oracle::mis_size(petersen()) == 4);
  CHECK_THROWS_AS(solve_exact(Graph(41)), CapacityError);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 40; ++t) {
    Graph g = oracle::random_bounded_graph(16, 4, 30, rng);
    auto s = solve_exact(g);
    CHECK(is_independent(g, s));
    CHECK(static_cast<int>(s.size()) == oracle::mis_size(g));
  }
}

TEST_CASE("worst-case bound") {
  CHECK(worst_case_bound(3) == doctest::Approx(0.6));
  CHECK(worst_case_bound(1) == doctest::Approx(1.0));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    Graph g = generate_regular(20 + 2 * static_cast<int>(rng() % 11), 3, rng());
    const auto greedy = solve_classical_greedy(g, rng());
    const auto best = solve_exact(g);
    CHECK(static_cast<double>(greedy.independent_set.size()) / best.size() >= worst_case_bound(3) - 1e-12);
  }
}

TEST_CASE("classical greedy") {
  CHECK(solve_classical_greedy(complete(4), 1).ratio() == 0.25);
  Graph star(4);
  for (int v = 1; v < 4; ++v) star.add_edge(0, v);
  const auto t = solve_classical_greedy(star, 5);
  CHECK(t.steps.front().node != 0);
  CHECK(t.independent_set.size() == 3);
  Graph g = generate_regular(100, 3, 9);
  check_trace(g, solve_classical_greedy(g, 3));
  CHECK(solve_classical_greedy(g, 3).independent_set == solve_classical_greedy(g, 3).independent_set);
}

TEST_CASE("quantum greedy small cases") {
  for (int p = 1; p <= 3; ++p) {
    ExpectationStore store;
    const auto one = solve_quantum_greedy(Graph(1), config(p), store);
    CHECK(one.independent_set == NodeSet{0});
    CHECK(one.ratio() == 1.0);
    CHECK(solve_quantum_greedy(complete(4), config(p), store).ratio() == 0.25);
  }
}

TEST_CASE("quantum greedy produces valid sets in every advice mode") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 12; ++t) {
    Graph g = generate_regular(60, 3, rng());
    for (int p = 1; p <= 2; ++p) {
      ExpectationStore store;
      SolverConfig cfg = config(p);
      cfg.seed = rng();
      cfg.advice = static_cast<Advice>(t % 3);
      cfg.shots = 500;
      cfg.noise = {0.03, -0.05, 0.04, rng()};
      cfg.tie_break = t % 2 ? TieBreak::random : TieBreak::lowest_id;
      check_trace(g, solve_quantum_greedy(g, cfg, store));
    }
  }
}

TEST_CASE("p=1 reproduces minimum-degree greedy") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    Graph g = generate_regular(80, 3, rng());
    const std::uint64_t seed = rng();
    ExpectationStore store;
    SolverConfig cfg = config(1);
    cfg.seed = seed;
    cfg.record_candidates = true;
    const auto q = solve_quantum_greedy(g, cfg, store);
    const auto c = solve_classical_greedy(g, seed, true);
    REQUIRE(q.steps.size() == c.steps.size());
    for (std::size_t k = 0; k < q.steps.size(); ++k) {
      CHECK(q.steps[k].node == c.steps[k].node);
      CHECK(q.steps[k].candidates == c.steps[k].candidates);
    }
  }
}

TEST_CASE("incremental and full recomputation agree") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    Graph g = generate_regular(100, 3, rng());
    SolverConfig cfg = config(2);
    cfg.seed = rng();
    ExpectationStore store;
    const auto inc = solve_quantum_greedy(g, cfg, store);
    cfg.full_recompute = true;
    const auto full = solve_quantum_greedy(g, cfg, store);
    REQUIRE(inc.steps.size() == full.steps.size());
    for (std::size_t k = 0; k < inc.steps.size(); ++k) {
      CHECK(inc.steps[k].node == full.steps[k].node);
      CHECK(inc.steps[k].value == full.steps[k].value);
    }
  }
}

TEST_CASE("advice observer sees ideal values of the alive nodes") {
  Graph g = generate_regular(40, 3, 2);
  SolverConfig cfg = config(2);
  ExpectationStore store;
  int rounds = 0;
  solve_quantum_greedy(g, cfg, store, [&](std::span<const double> advice, const Graph& residual) {
    ++rounds;
    for (NodeId i : residual.alive_nodes()) {
      const auto c = extract_lightcone(residual, i, 2);
      CHECK(std::abs(advice[i] - evaluate_cone(c, cfg.angles)) <= 1e-12);
    }
  });
  CHECK(rounds > 0);
}

TEST_CASE("a uniform advice bias changes no selection") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    Graph g = generate_regular(80, 3, rng());
    SolverConfig cfg = config(2);
    cfg.advice = Advice::noise;
    cfg.noise = {0.03, 0.0, 0.04, rng()};
    cfg.seed = rng();
    ExpectationStore store;
    const auto a = solve_quantum_greedy(g, cfg, store);
    cfg.noise.alpha = -0.05;
    const auto b = solve_quantum_greedy(g, cfg, store);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t k = 0; k < a.steps.size(); ++k) CHECK(a.steps[k].node == b.steps[k].node);
  }
}

TEST_CASE("trace output") {
  Graph g = generate_regular(10, 3, 1);
  ExpectationStore store;
  std::ostringstream out;
  write_trace(out, solve_quantum_greedy(g, config(1), store));
  const std::string s = out.str();
  CHECK(s.find("set_size ") != std::string::npos);
  CHECK(s.rfind("set_size", 0) != 0);
  CHECK(s.starts_with("0 "));
}

TEST_CASE("config validation") {
  SolverConfig cfg = config(2);
  cfg.depth = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = config(1);
  cfg.delta = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(tie_break_from_string("lowest-id") == TieBreak::lowest_id);
  CHECK(advice_from_string("noise") == Advice::noise);
  CHECK_THROWS(advice_from_string("bogus"));
}
