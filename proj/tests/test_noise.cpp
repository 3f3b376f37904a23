#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "qgreedy/canonical.hpp"
#include "qgreedy/lightcone.hpp"
#include "qgreedy/noise.hpp"

using namespace qgreedy;

TEST_CASE("apply_noise") {
  NoiseParams none;
  CHECK(apply_noise(0.37, 10, none, 0.0) == 0.37);
  NoiseParams p{0.03, -0.05, 0.0, 0};
  CHECK(apply_noise(0.5, 10, p, 0.0) == doctest::Approx(std::pow(0.97, 10) * 0.5 - 0.05).epsilon(1e-14));
  CHECK(apply_noise(0.5, 10, p, 0.0) == doctest::Approx(0.31870).epsilon(1e-4));
  // shrink only
  NoiseParams s{0.1, 0.0, 0.0, 0};
  CHECK(apply_noise(0.8, 7, s, 0.0) == doctest::Approx(std::pow(0.9, 7) * 0.8));
  std::mt19937_64 rng(1);
  CHECK(apply_noise(0.8, 7, s, rng) == doctest::Approx(std::pow(0.9, 7) * 0.8));
}

TEST_CASE("shrink monotonicity") {
  for (int size = 1; size < 20; ++size) {
    CHECK(apply_noise(0.6, size + 1, {0.05, 0, 0, 0}, 0.0) < apply_noise(0.6, size, {0.05, 0, 0, 0}, 0.0));
    CHECK(apply_noise(0.6, size, {0.06, 0, 0, 0}, 0.0) < apply_noise(0.6, size, {0.05, 0, 0, 0}, 0.0));
  }
}

TEST_CASE("parameter domain") {
  CHECK_THROWS_AS(NoiseParams({1.0, 0, 0, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams({-0.1, 0, 0, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams({0.1, 0, -1, 0}).validate(), std::invalid_argument);
}

TEST_CASE("realizations are deterministic per key") {
  NoiseParams p{0.03, -0.05, 0.04, 17};
  NoiseRealization a(p), b(p), c({0.03, -0.05, 0.04, 18});
  const auto k1 = canonical_key(tree_cone(1, 3));
  const auto k2 = canonical_key(tree_cone(2, 3));
  // lookup order does not matter
  const double a1 = a.offset(k1), a2 = a.offset(k2);
  CHECK(b.offset(k2) == a2);
  CHECK(b.offset(k1) == a1);
  CHECK(a.offset(k1) == a1);
  CHECK(c.offset(k1) != a1);
  CHECK(a.apply(0.5, 4, k1) == doctest::Approx(std::pow(0.97, 4) * 0.5 - 0.05 + a1));

  std::ostringstream out;
  a.write(out);
  std::istringstream in(out.str());
  double eta, alpha, sigma;
  unsigned long long seed;
  in >> eta >> alpha >> sigma >> seed;
  CHECK(eta == 0.03);
  CHECK(alpha == -0.05);
  CHECK(sigma == 0.04);
  CHECK(seed == 17);
  std::string key;
  double off;
  int lines = 0;
  while (in >> key >> off) {
    CHECK(key_from_hex(key).bytes().size() > 0);
    ++lines;
  }
  CHECK(lines == 2);
}

TEST_CASE("fit_noise recovers noiseless parameters") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<NoisePair> zero, shifted;
  for (int k = 0; k < 60; ++k) {
    const double x = u(rng);
    const int s = 4 + k % 7;
    zero.push_back({x, x, s});
    shifted.push_back({x, std::pow(0.9, s) * x + 0.2, s});
  }
  auto f0 = fit_noise(zero);
  CHECK(f0.eta == doctest::Approx(0.0));
  CHECK(std::abs(f0.alpha) < 1e-12);
  CHECK(f0.sigma < 1e-12);
  auto f1 = fit_noise(shifted);
  CHECK(std::abs(f1.eta - 0.1) <= 1e-4 / 2 + 1e-12);
  CHECK(std::abs(f1.alpha - 0.2) <= 1e-3);
}

TEST_CASE("fit_noise rejects unidentifiable input") {
  CHECK_THROWS_AS(fit_noise(std::vector<NoisePair>{{0.1, 0.1, 3}, {0.2, 0.2, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_noise(std::vector<NoisePair>{{0.1, 0.1, 3}, {0.2, 0.2, 3}, {0.3, 0.3, 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_noise(std::vector<NoisePair>{{0.1, 0.1, 3}, {0.1, 0.2, 4}, {0.1, 0.3, 5}}),
                  std::invalid_argument);
}

TEST_CASE("required_shots") {
  CHECK(required_shots(1, 0.5, 1.0) == 1);
  CHECK(required_shots(1000, 0.05, 0.1) == 991);
  CHECK(required_shots(1000, 0.01, 0.05) == 4606);
  CHECK_THROWS_AS(required_shots(1000, 0.05, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(required_shots(1000, 1.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(required_shots(0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("sample_shots") {
  CHECK(sample_shots(1.0, 17, 3) == 1.0);
  CHECK(sample_shots(-1.0, 17, 3) == -1.0);
  CHECK(sample_shots(0.3, 100, 5) == sample_shots(0.3, 100, 5));
  int inside = 0;
  for (std::uint64_t s = 0; s < 200; ++s) inside += std::abs(sample_shots(0.0, 20000, s)) < 0.03;
  CHECK(inside >= 198);

  constexpr long long m = 50;
  double sum = 0, sum2 = 0;
  constexpr int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    const double x = sample_shots(0.2, m, 1000 + r);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / reps;
  const double var = sum2 / reps - mean * mean;
  CHECK(std::abs(mean - 0.2) < 0.01);
  CHECK(var <= 1.1 / m);
  CHECK_THROWS_AS(sample_shots(1.5, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_shots(0.5, 0, 1), std::invalid_argument);
}
