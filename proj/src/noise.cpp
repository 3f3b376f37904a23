#include "qgreedy/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace qgreedy {

double sample_shots(double ideal, long long shots, std::uint64_t seed) {
  if (!(ideal >= -1.0 && ideal <= 1.0))
    throw std::invalid_argument(fmt::format("sample_shots: ideal value {} outside [-1, 1]", ideal));
  if (shots < 1) throw std::invalid_argument("sample_shots: need at least one shot");
  std::mt19937_64 rng(seed);
  // number of +1 outcomes
  std::binomial_distribution<long long> plus(shots, (1.0 + ideal) / 2.0);
  const long long k = plus(rng);
  return static_cast<double>(2 * k - shots) / static_cast<double>(shots);
}

void NoiseParams::validate() const {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument(fmt::format("noise: eta {} outside [0, 1)", eta));
  if (!(sigma >= 0.0)) throw std::invalid_argument(fmt::format("noise: sigma {} is negative", sigma));
  if (!std::isfinite(alpha)) throw std::invalid_argument("noise: alpha must be finite");
}

double apply_noise(double ideal, int cone_size, const NoiseParams& params, double xi) {
  params.validate();
  if (!(ideal >= -1.0 - 1e-9 && ideal <= 1.0 + 1e-9))
    throw std::invalid_argument(fmt::format("apply_noise: ideal value {} outside [-1, 1]", ideal));
  if (cone_size < 1) throw std::invalid_argument("apply_noise: cone size must be >= 1");
  return std::pow(1.0 - params.eta, cone_size) * ideal + params.alpha + xi;
}

double apply_noise(double ideal, int cone_size, const NoiseParams& params, std::mt19937_64& rng) {
  double xi = 0.0;
  if (params.sigma > 0.0) xi = std::normal_distribution<double>(0.0, params.sigma)(rng);
  return apply_noise(ideal, cone_size, params, xi);
}

NoiseRealization::NoiseRealization(NoiseParams params) : params_(params) { params_.validate(); }

double NoiseRealization::offset(const CanonicalKey& key) const {
  double xi = 0.0;
  if (params_.sigma > 0.0) {
    std::mt19937_64 rng(stable_hash(key.bytes()) ^ (params_.seed * 0x9e3779b97f4a7c15ULL));
    xi = std::normal_distribution<double>(0.0, params_.sigma)(rng);
  }
  std::lock_guard lock(mutex_);
  drawn_.emplace(key.hex(), xi);
  return xi;
}

double NoiseRealization::apply(double ideal, int cone_size, const CanonicalKey& key) const {
  return apply_noise(ideal, cone_size, params_, offset(key));
}

void NoiseRealization::write(std::ostream& out) const {
  out << fmt::format("{:.17g} {:.17g} {:.17g} {}\n", params_.eta, params_.alpha, params_.sigma, params_.seed);
  std::lock_guard lock(mutex_);
  for (const auto& [hex, xi] : drawn_) out << hex << ' ' << fmt::format("{:.17g}", xi) << '\n';
}

NoiseParams fit_noise(std::span<const NoisePair> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("fit_noise: need at least 3 pairs");
  const auto [min_x, max_x] = std::minmax_element(pairs.begin(), pairs.end(),
                                                  [](const auto& a, const auto& b) { return a.ideal < b.ideal; });
  const auto [min_s, max_s] = std::minmax_element(
      pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.cone_size < b.cone_size; });
  if (min_x->ideal == max_x->ideal) throw std::invalid_argument("fit_noise: all ideal values coincide");
  if (min_s->cone_size == max_s->cone_size) throw std::invalid_argument("fit_noise: all cone sizes coincide");

  const double count = static_cast<double>(pairs.size());
  auto alpha_and_sse = [&](double eta) {
    double mean_residual = 0.0;
    for (const auto& q : pairs) mean_residual += q.noisy - std::pow(1.0 - eta, q.cone_size) * q.ideal;
    mean_residual /= count;
    double sse = 0.0;
    for (const auto& q : pairs) {
      const double r = std::pow(1.0 - eta, q.cone_size) * q.ideal + mean_residual - q.noisy;
      sse += r * r;
    }
    return std::pair{mean_residual, sse};
  };

  NoiseParams best;
  double best_sse = std::numeric_limits<double>::infinity();
  constexpr int steps = 5000;  // eta = k * 1e-4 up to 0.5
  for (int k = 0; k <= steps; ++k) {
    const double eta = 0.5 * k / steps;
    const auto [alpha, sse] = alpha_and_sse(eta);
    if (sse < best_sse) {
      best_sse = sse;
      best.eta = eta;
      best.alpha = alpha;
    }
  }
  // residuals have zero mean at the optimum
  best.sigma = std::sqrt(best_sse / (count - 1.0));
  return best;
}

long long required_shots(long long n, double eps, double gap) {
  if (n < 1) throw std::invalid_argument("required_shots: n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_shots: eps must lie in (0, 1)");
  if (!(gap > 0.0)) throw std::invalid_argument("required_shots: gap must be positive; use the degeneracy cutoff instead");
  const double m = std::log(static_cast<double>(n) / eps) / (gap * gap);
  return std::max(1LL, static_cast<long long>(std::ceil(m)));
}

}  // namespace qgreedy
