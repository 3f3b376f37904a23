#include "qgreedy/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>

#include "qgreedy/angles.hpp"
#include "qgreedy/errors.hpp"

namespace qgreedy {

double greedy_asymptote() { return 6.0 * std::log(1.5) - 2.0; }

void ExperimentPlan::validate() const {
  if (sizes.empty()) throw std::invalid_argument("plan: no sizes");
  for (int n : sizes)
    if (n < 1) throw std::invalid_argument(fmt::format("plan: size {} must be >= 1", n));
  if (instances < 1) throw std::invalid_argument("plan: instances must be >= 1");
  if (degree < 0) throw std::invalid_argument("plan: degree must be >= 0");
  if (solvers.empty()) throw std::invalid_argument("plan: no solvers");
  for (const auto& s : solvers)
    if (s != "greedy" && s != "qgreedy" && s != "exact")
      throw std::invalid_argument(fmt::format("plan: unknown solver '{}'", s));
  const bool quantum = std::find(solvers.begin(), solvers.end(), "qgreedy") != solvers.end();
  if (quantum && depths.empty()) throw std::invalid_argument("plan: qgreedy needs at least one depth");
  for (int p : depths)
    if (p < 1) throw std::invalid_argument(fmt::format("plan: depth {} must be >= 1", p));
  if (lambda < 1.0) throw std::invalid_argument("plan: lambda must be >= 1");
  if (realizations < 1) throw std::invalid_argument("plan: realizations must be >= 1");
  if (delta < 0.0) throw std::invalid_argument("plan: delta must be >= 0");
  if (advice == Advice::shots && shots < 1) throw std::invalid_argument("plan: shots must be >= 1");
  if (advice == Advice::noise) noise.validate();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw FormatError(fmt::format("plan: bad value '{}' for {}", s, key));
  return value;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw FormatError(fmt::format("plan: bad boolean '{}' for {}", s, key));
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(fmt::format("plan line {}: expected 'key = value'", lineno));
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    auto ints = [&] {
      std::vector<int> out;
      for (const auto& item : split_list(value)) out.push_back(parse_number<int>(key, item));
      return out;
    };
    if (key == "sizes") plan.sizes = ints();
    else if (key == "instances") plan.instances = parse_number<int>(key, value);
    else if (key == "degree") plan.degree = parse_number<int>(key, value);
    else if (key == "depths") plan.depths = ints();
    else if (key == "solvers") plan.solvers = split_list(value);
    else if (key == "lambda") plan.lambda = parse_number<double>(key, value);
    else if (key == "advice") plan.advice = advice_from_string(value);
    else if (key == "shots") plan.shots = parse_number<long long>(key, value);
    else if (key == "eta") plan.noise.eta = parse_number<double>(key, value);
    else if (key == "alpha") plan.noise.alpha = parse_number<double>(key, value);
    else if (key == "sigma") plan.noise.sigma = parse_number<double>(key, value);
    else if (key == "noise_seed") plan.noise.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "realizations") plan.realizations = parse_number<int>(key, value);
    else if (key == "delta") {
      plan.auto_delta = value == "auto";
      plan.delta = plan.auto_delta ? 0.0 : parse_number<double>(key, value);
    } else if (key == "tie_break") plan.tie_break = tie_break_from_string(value);
    else if (key == "seed") plan.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "angles_dir") plan.angles_dir = value;
    else if (key == "output") plan.output = value;
    else if (key == "threads") plan.threads = parse_number<int>(key, value);
    else if (key == "timestamp") plan.timestamp = parse_bool(key, value);
    else if (key == "engine") plan.engine.engine = engine_from_string(value);
    else if (key == "statevector_max_qubits") plan.engine.statevector_max_qubits = parse_number<int>(key, value);
    else if (key == "contraction_max_entries")
      plan.engine.contraction_max_entries = parse_number<std::size_t>(key, value);
    else throw FormatError(fmt::format("plan line {}: unknown key '{}'", lineno, key));
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open plan file '{}'", path));
  return parse_plan(in);
}

std::uint64_t instance_seed(std::uint64_t master, int size, int index) {
  return mix(mix(mix(master) ^ static_cast<std::uint64_t>(size)) ^ static_cast<std::uint64_t>(index));
}

Graph plan_instance(const ExperimentPlan& plan, int size, int index) {
  return generate_regular(size, plan.degree, instance_seed(plan.seed, size, index));
}

std::string angle_file_name(int depth, int degree, double lambda) {
  return fmt::format("p{}_d{}_lambda{:g}.txt", depth, degree, lambda);
}

const BenchmarkRow* BenchmarkReport::find(int size, std::string_view solver, int depth) const {
  for (const auto& r : rows)
    if (r.size == size && r.solver == solver && r.depth == depth) return &r;
  return nullptr;
}

std::pair<double, double> mean_sem(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_sem: empty sample");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(xs.size()))};
}

namespace {

// (size, solver tag, depth) -> ratio per instance index
using CellKey = std::tuple<int, std::string, int>;

struct Cell {
  std::string solver;
  int depth;
};

std::string plan_fingerprint(const ExperimentPlan& p) {
  return fmt::format("d={} lambda={:.17g} advice={} shots={} eta={:.17g} alpha={:.17g} sigma={:.17g} nseed={} "
                     "real={} delta={} tie={} seed={} dir={}",
                     p.degree, p.lambda, to_string(p.advice), p.shots, p.noise.eta, p.noise.alpha, p.noise.sigma,
                     p.noise.seed, p.realizations, p.auto_delta ? "auto" : fmt::format("{:.17g}", p.delta),
                     to_string(p.tie_break), p.seed, p.angles_dir);
}

}  // namespace

BenchmarkReport run_plan(const ExperimentPlan& plan, const std::function<void(int, int)>& progress) {
  plan.validate();

  const bool quantum = std::find(plan.solvers.begin(), plan.solvers.end(), "qgreedy") != plan.solvers.end();
  std::map<int, AngleSchedule> schedules;
  std::map<int, double> deltas;
  std::map<int, std::unique_ptr<ExpectationStore>> stores;
  if (quantum) {
    for (int p : plan.depths) {
      const auto path = std::filesystem::path(plan.angles_dir) / angle_file_name(p, plan.degree, plan.lambda);
      if (!std::filesystem::exists(path)) throw std::runtime_error(fmt::format("missing angle file '{}'", path.string()));
      schedules[p] = load_angles(path.string());
      deltas[p] = plan.auto_delta ? single_edge_cutoff(schedules[p], plan.engine) : plan.delta;
      stores[p] = std::make_unique<ExpectationStore>();
    }
  }

  std::vector<Cell> cells;
  for (const auto& s : plan.solvers) {
    if (s != "qgreedy") {
      cells.push_back({s, 0});
      continue;
    }
    for (int p : plan.depths) {
      if (plan.advice == Advice::noise && plan.realizations > 1)
        for (int r = 0; r < plan.realizations; ++r) cells.push_back({fmt::format("qgreedy#{}", r), p});
      else
        cells.push_back({s, p});
    }
  }

  std::map<CellKey, std::map<int, double>> results;
  std::mutex mutex;

  // resume from a previous partial run of the same plan
  const std::string partial_path = plan.output.empty() ? std::string{} : plan.output + ".partial";
  const std::string fingerprint = plan_fingerprint(plan);
  if (!partial_path.empty()) {
    std::ifstream in(partial_path);
    std::string header;
    if (in && std::getline(in, header) && header == "# " + fingerprint) {
      int size, depth, index;
      std::string solver;
      double ratio;
      while (in >> size >> solver >> depth >> index >> ratio) results[{size, solver, depth}][index] = ratio;
    }
  }
  std::ofstream partial;
  if (!partial_path.empty()) {
    if (const auto parent = std::filesystem::path(plan.output).parent_path(); !parent.empty())
      std::filesystem::create_directories(parent);
    // rewrite with what was recovered so a torn last line cannot poison the next resume
    partial.open(partial_path, std::ios::trunc);
    if (!partial) throw std::runtime_error(fmt::format("cannot write '{}'", partial_path));
    partial << "# " << fingerprint << '\n';
    for (const auto& [key, by_index] : results)
      for (const auto& [index, ratio] : by_index)
        partial << fmt::format("{} {} {} {} {:.17g}\n", std::get<0>(key), std::get<1>(key), std::get<2>(key), index,
                               ratio);
    partial.flush();
  }

  struct Job {
    int size;
    int index;
  };
  std::vector<Job> jobs;
  for (int n : plan.sizes)
    for (int k = 0; k < plan.instances; ++k) {
      bool done = true;
      for (const auto& c : cells) {
        auto it = results.find({n, c.solver, c.depth});
        if (it == results.end() || !it->second.contains(k)) {
          done = false;
          break;
        }
      }
      if (!done) jobs.push_back({n, k});
    }

  const int total = static_cast<int>(jobs.size());
  std::atomic<int> next{0};
  std::atomic<int> finished{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= total) return;
      const auto [n, k] = jobs[j];
      try {
        const Graph g = plan_instance(plan, n, k);
        const std::uint64_t seed = instance_seed(plan.seed, n, k);
        std::vector<std::pair<Cell, double>> local;
        for (const auto& c : cells) {
          double r = 0.0;
          if (c.solver == "greedy") {
            r = solve_classical_greedy(g, seed).ratio();
          } else if (c.solver == "exact") {
            r = static_cast<double>(solve_exact(g, 64).size()) / n;
          } else {
            SolverConfig cfg;
            cfg.depth = c.depth;
            cfg.angles = schedules.at(c.depth);
            cfg.tie_break = plan.tie_break;
            cfg.delta = deltas.at(c.depth);
            cfg.advice = plan.advice;
            cfg.shots = plan.shots;
            cfg.noise = plan.noise;
            if (auto hash = c.solver.find('#'); hash != std::string::npos)
              cfg.noise.seed = plan.noise.seed + std::stoull(c.solver.substr(hash + 1));
            cfg.seed = seed;
            cfg.engine = plan.engine;
            r = solve_quantum_greedy(g, cfg, *stores.at(c.depth)).ratio();
          }
          local.emplace_back(c, r);
        }
        std::lock_guard lock(mutex);
        for (const auto& [c, r] : local) {
          results[{n, c.solver, c.depth}][k] = r;
          if (partial.is_open()) partial << fmt::format("{} {} {} {} {:.17g}\n", n, c.solver, c.depth, k, r);
        }
        if (partial.is_open()) partial.flush();
        const int done = ++finished;
        if (progress) progress(done, total);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  int threads = plan.threads > 0 ? plan.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  BenchmarkReport report;
  for (const auto& [key, by_index] : results) {
    const auto& [n, solver, depth] = key;
    const bool wanted = std::find(plan.sizes.begin(), plan.sizes.end(), n) != plan.sizes.end() &&
                        std::any_of(cells.begin(), cells.end(),
                                    [&](const Cell& c) { return c.solver == solver && c.depth == depth; });
    if (!wanted) continue;
    BenchmarkRow row;
    row.size = n;
    row.solver = solver;
    row.depth = depth;
    for (const auto& [index, r] : by_index)
      if (index < plan.instances) row.ratios.push_back(r);
    row.instances = static_cast<int>(row.ratios.size());
    std::tie(row.mean_r, row.sem) = mean_sem(row.ratios);
    row.sem3 = 3.0 * row.sem;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_csv(std::ostream& out, const BenchmarkReport& report, const ExperimentPlan& plan) {
  if (plan.timestamp)
    out << fmt::format("# generated {:%Y-%m-%dT%H:%M:%S}\n", fmt::gmtime(std::time(nullptr)));
  out << fmt::format("# r_inf {:.6f}\n", kPrioritizedSearchRatio);
  out << fmt::format("# greedy_asymptote {:.17g}\n", greedy_asymptote());
  out << "size,solver,depth,instances,mean_r,sem,3sem,lambda,advice,seed\n";
  for (const auto& r : report.rows) {
    const std::string advice = r.solver.starts_with("qgreedy") ? std::string(to_string(plan.advice)) : "none";
    out << fmt::format("{},{},{},{},{:.17g},{:.17g},{:.17g},{:g},{},{}\n", r.size, r.solver, r.depth, r.instances,
                       r.mean_r, r.sem, r.sem3, plan.lambda, advice, plan.seed);
  }
}

namespace {

// Optimal c and squared residual of value = c * p^d at fixed d.
std::pair<double, double> power_fit_at(std::span<const std::pair<double, double>> pts, double d) {
  double num = 0.0, den = 0.0;
  for (const auto& [p, y] : pts) {
    const double f = std::pow(p, d);
    num += f * y;
    den += f * f;
  }
  const double c = num / den;
  double sse = 0.0;
  for (const auto& [p, y] : pts) {
    const double r = c * std::pow(p, d) - y;
    sse += r * r;
  }
  return {c, sse};
}

struct PowerFitData {
  std::span<const std::pair<double, double>> pts;
};

double power_sse(double d, void* params) {
  return power_fit_at(static_cast<PowerFitData*>(params)->pts, d).second;
}

}  // namespace

CurveFit fit_curve(std::span<const std::pair<double, double>> points, std::string_view model) {
  for (const auto& [p, y] : points)
    if (!std::isfinite(p) || !std::isfinite(y)) throw std::invalid_argument("fit_curve: non-finite point");
  CurveFit fit;
  if (model == "a/p+b") {
    if (points.size() < 2) throw std::invalid_argument("fit_curve: a/p+b needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& [p, y] : points) {
      if (p == 0.0) throw std::invalid_argument("fit_curve: p = 0 in a/p+b");
      const double x = 1.0 / p;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double var = sxx - sx * sx / n;
    if (var <= 1e-15 * std::max(1.0, sxx)) throw std::invalid_argument("fit_curve: all p coincide");
    const double a = (sxy - sx * sy / n) / var;
    const double b = (sy - a * sx) / n;
    double sse = 0;
    for (const auto& [p, y] : points) sse += (a / p + b - y) * (a / p + b - y);
    fit.model = "a/p+b";
    fit.params = {a, b};
    fit.residual = std::sqrt(sse);
    return fit;
  }
  if (model == "c*p^d" || model == "c·p^d" || model == "cp^d") {
    if (points.size() < 2) throw std::invalid_argument("fit_curve: c*p^d needs at least 2 points");
    for (const auto& [p, y] : points)
      if (p <= 0.0) throw std::invalid_argument("fit_curve: c*p^d needs positive p");
    bool distinct = false;
    for (const auto& [p, y] : points) distinct |= p != points.front().first;
    if (!distinct) throw std::invalid_argument("fit_curve: all p coincide");

    // coarse scan of the exponent, c in closed form at each step
    constexpr double lo = -5.0, hi = 5.0, step = 1e-3;
    double best_d = lo, best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; lo + k * step <= hi + 1e-12; ++k) {
      const double d = lo + k * step;
      const double sse = power_fit_at(points, d).second;
      if (sse < best_sse) {
        best_sse = sse;
        best_d = d;
      }
    }
    // refine inside the bracketing cell
    PowerFitData data{points};
    gsl_function fn{&power_sse, &data};
    const double a = std::max(lo, best_d - step), b = std::min(hi, best_d + step);
    if (best_d > a && best_d < b && power_sse(a, &data) > best_sse && power_sse(b, &data) > best_sse) {
      gsl_error_handler_t* old = gsl_set_error_handler_off();
      gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
      if (gsl_min_fminimizer_set_with_values(m, &fn, best_d, best_sse, a, power_sse(a, &data), b,
                                             power_sse(b, &data)) == GSL_SUCCESS) {
        for (int it = 0; it < 200; ++it) {
          if (gsl_min_fminimizer_iterate(m) != GSL_SUCCESS) break;
          if (gsl_min_test_interval(gsl_min_fminimizer_x_lower(m), gsl_min_fminimizer_x_upper(m), 1e-14, 0.0) ==
              GSL_SUCCESS)
            break;
        }
        if (gsl_min_fminimizer_f_minimum(m) <= best_sse) best_d = gsl_min_fminimizer_x_minimum(m);
      }
      gsl_min_fminimizer_free(m);
      gsl_set_error_handler(old);
    }
    const auto [c, sse] = power_fit_at(points, best_d);
    fit.model = "c*p^d";
    fit.params = {c, best_d};
    fit.residual = std::sqrt(sse);
    return fit;
  }
  throw std::invalid_argument(fmt::format("fit_curve: unknown model '{}'", model));
}

}  // namespace qgreedy
