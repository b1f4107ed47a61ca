#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace istbench {

// SplitMix64 finalizer. Used to derive decorrelated substream seeds from a
// single master seed so that adding a sampling site to one experiment does
// not perturb the draws of another.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream);

// Thin deterministic wrapper around mt19937_64. All randomness in the
// library flows through this type; reproducibility of results is part of
// the output contract, so nothing below may read entropy from the
// environment.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent generator for substream `stream` of `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_stream(seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double angle();                          // [0, 2*pi)
  double gaussian();                       // standard normal
  std::int64_t binomial(std::int64_t trials, double p);

 private:
  std::mt19937_64 engine_;
};

// Sequential conditional-binomial multinomial sampler. `probabilities` must
// be nonnegative and sum to 1 within 1e-9; the counts always sum to `trials`.
std::vector<std::int64_t> sample_multinomial(Rng& rng, std::int64_t trials,
                                             const Eigen::VectorXd& probabilities);

}  // namespace istbench
