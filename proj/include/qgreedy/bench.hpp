#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgreedy/graph.hpp"
#include "qgreedy/noise.hpp"
#include "qgreedy/solver.hpp"

namespace qgreedy {

inline constexpr double kPrioritizedSearchRatio = 0.445330;  // r_inf of the prioritized-search reference
double greedy_asymptote();                                   // 6 ln(3/2) - 2

struct ExperimentPlan {
  std::vector<int> sizes{50, 100, 200, 500};
  int instances = 100;
  int degree = 3;
  std::vector<int> depths{1, 2, 3};
  std::vector<std::string> solvers{"greedy", "qgreedy"};  // also "exact"
  double lambda = 1.0;
  Advice advice = Advice::ideal;
  long long shots = 20000;
  NoiseParams noise;
  int realizations = 1;        // noise advice: independent offset tables
  double delta = 0.0;          // tie window for qgreedy
  bool auto_delta = false;     // "delta = auto": single-edge cutoff per depth
  TieBreak tie_break = TieBreak::random;
  std::uint64_t seed = 1;
  std::string angles_dir = "data/angles";
  std::string output;          // CSV path; empty = stdout only
  int threads = 0;             // 0 = hardware concurrency
  bool timestamp = true;       // leading "# generated ..." line
  EngineOptions engine;

  void validate() const;
};

/// Line-oriented `key = value`; '#' starts a comment. Lists are comma separated.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

/// Deterministic instance seed for (master seed, size, index).
std::uint64_t instance_seed(std::uint64_t master, int size, int index);
/// The random d-regular instance shared by every solver at (size, index).
Graph plan_instance(const ExperimentPlan& plan, int size, int index);

/// "p<depth>_d<degree>_lambda<lambda>.txt"
std::string angle_file_name(int depth, int degree, double lambda);

struct BenchmarkRow {
  int size = 0;
  std::string solver;
  int depth = 0;  // 0 for classical solvers
  int instances = 0;
  double mean_r = 0.0;
  double sem = 0.0;
  double sem3 = 0.0;
  std::vector<double> ratios;  // by instance index
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;  // sorted by (size, solver, depth)
  const BenchmarkRow* find(int size, std::string_view solver, int depth) const;
};

/// Runs every configured solver on every instance. Per-instance results are
/// appended to `<output>.partial` as they finish and picked up again by a
/// rerun with the same plan, so interrupted sweeps resume. `progress`, if
/// set, is called after each instance with (done, total).
BenchmarkReport run_plan(const ExperimentPlan& plan,
                         const std::function<void(int, int)>& progress = {});

/// CSV `size,solver,depth,instances,mean_r,sem,3sem,lambda,advice,seed`,
/// preceded by comment lines with the reference constants.
void write_csv(std::ostream& out, const BenchmarkReport& report, const ExperimentPlan& plan);

/// Sample mean and standard error (sample std / sqrt(n); 0 for n = 1).
std::pair<double, double> mean_sem(std::span<const double> xs);

struct CurveFit {
  std::string model;           // "a/p+b" or "c*p^d"
  std::vector<double> params;  // (a, b) or (c, d)
  double residual = 0.0;       // Euclidean norm of the residual vector
};

/// Least-squares fit of value(p). "a/p+b" is linear in 1/p; "c*p^d" scans
/// d with the optimal c in closed form and refines the best d.
CurveFit fit_curve(std::span<const std::pair<double, double>> points, std::string_view model);

}  // namespace qgreedy
