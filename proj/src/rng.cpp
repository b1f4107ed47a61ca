#include "istbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "istbench/errors.hpp"

namespace istbench {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (stream * 0xD1B54A32D192ED03ull);
  splitmix64(state);
  return splitmix64(state);
}

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::angle() { return uniform(0.0, 2.0 * std::numbers::pi); }

double Rng::gaussian() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
  if (trials < 0) throw ValidationError("binomial: negative trial count");
  p = std::clamp(p, 0.0, 1.0);
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(engine_);
}

std::vector<std::int64_t> sample_multinomial(Rng& rng, std::int64_t trials,
                                             const Eigen::VectorXd& probabilities) {
  const auto n = static_cast<std::size_t>(probabilities.size());
  if (n == 0) throw ValidationError("multinomial: empty probability vector");
  if (probabilities.minCoeff() < -1e-12)
    throw ValidationError("multinomial: negative probability");
  if (std::abs(probabilities.sum() - 1.0) > 1e-9)
    throw ValidationError("multinomial: probabilities do not sum to 1");

  std::vector<std::int64_t> counts(n, 0);
  std::int64_t remaining = trials;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < n && remaining > 0; ++i) {
    const double p = std::max(probabilities(static_cast<Eigen::Index>(i)), 0.0);
    const double conditional = mass_left > 0.0 ? std::min(p / mass_left, 1.0) : 1.0;
    counts[i] = rng.binomial(remaining, conditional);
    remaining -= counts[i];
    mass_left -= p;
  }
  counts[n - 1] += remaining;
  return counts;
}

}  // namespace istbench
