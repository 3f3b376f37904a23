#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <random>
#include <span>
#include <string>

#include "qgreedy/canonical.hpp"

namespace qgreedy {

/// Empirical mean of `shots` i.i.d. +-1 outcomes whose mean is `ideal`.
/// Throws std::invalid_argument if ideal is outside [-1, 1] or shots < 1.
double sample_shots(double ideal, long long shots, std::uint64_t seed);

/// Phenomenological hardware error model
///   noisy = (1 - eta)^size * ideal + alpha + xi,   xi ~ Normal(0, sigma).
struct NoiseParams {
  double eta = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless 0 <= eta < 1 and sigma >= 0.
  void validate() const;
};

/// Applies the model with an explicit residual offset xi.
double apply_noise(double ideal, int cone_size, const NoiseParams& params, double xi);
/// Applies the model drawing xi from `rng`.
double apply_noise(double ideal, int cone_size, const NoiseParams& params, std::mt19937_64& rng);

/// One noise realization: a fixed residual offset per canonical cone key.
/// Offsets are derived from (seed, key bytes) alone, so the table does not
/// depend on the order in which keys are first seen.
class NoiseRealization {
 public:
  explicit NoiseRealization(NoiseParams params);

  const NoiseParams& params() const { return params_; }
  double offset(const CanonicalKey& key) const;
  double apply(double ideal, int cone_size, const CanonicalKey& key) const;

  /// Header "eta alpha sigma seed", then "cone_key offset" for every key
  /// looked up so far, sorted by key.
  void write(std::ostream& out) const;

 private:
  NoiseParams params_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, double> drawn_;  // hex key -> offset
};

/// One (ideal, noisy, cone size) observation.
struct NoisePair {
  double ideal;
  double noisy;
  int cone_size;
};

/// Least-squares fit of eta and alpha (scan over eta in [0, 0.5], step
/// 1e-4, closed-form alpha per eta); sigma is the residual standard
/// deviation at the optimum. Throws std::invalid_argument on fewer than 3
/// pairs or when all ideal values or all cone sizes coincide.
NoiseParams fit_noise(std::span<const NoisePair> pairs);

/// Minimum shot count from the union-bound Hoeffding argument,
/// ceil(ln(n / eps) / gap^2).
long long required_shots(long long n, double eps, double gap);

}  // namespace qgreedy
