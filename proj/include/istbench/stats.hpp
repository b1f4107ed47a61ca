#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace istbench {

struct DistinguishabilityReport {
  std::string hypothesis_a;
  std::string hypothesis_b;
  // True when the outcome distributions coincide; no number of runs then
  // separates the hypotheses and runs_required is meaningless (left at 0).
  bool indistinguishable = false;
  std::uint64_t runs_required = 0;  // >= 1 otherwise
  double confidence = 0.0;
  double chernoff_information = 0.0;  // nats per run
};

// Expected number of independent runs after which Bayesian model selection
// between the two outcome distributions reaches `confidence`: the error of
// the optimal test decays like exp(-n * C) with C the Chernoff information
//
//   C = -min_{s in [0,1]} ln sum_i a_i^s b_i^(1-s)
//
// so runs_required = ceil(-ln(1 - confidence) / C), at least 1. Disjoint
// supports give C = infinity and a single run. Symmetric in (a, b).
// Distributions must be nonnegative and sum to 1 within 1e-9; confidence
// must lie strictly inside (0, 1).
DistinguishabilityReport distinguish(const Eigen::VectorXd& dist_a,
                                     const Eigen::VectorXd& dist_b, double confidence,
                                     const std::string& label_a = "A",
                                     const std::string& label_b = "B");

}  // namespace istbench
