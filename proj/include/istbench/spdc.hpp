#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "istbench/states.hpp"

namespace istbench {

// Down-conversion ring model. The emission cone is cut into M angular
// sectors per side; momentum conservation pairs sector k of the upper half
// with the antipodal sector of the lower half, which both halves index as k.
// Each pair carries a random phase theta_k.
//
// kSharedPair: the pair phase divides between the two photons and the
// stored amplitudes are written in the source-locked gauge of the upper arm,
// so the full pattern e^(i theta_k) appears on the joint amplitude while the
// mirror-oriented lower combiner sees it with the opposite sign. This is the
// discrete stand-in for the interferometric phase stability the two-aperture
// correlation test assumes.
//
// kIndependent: the two arms pick up unrelated patterns (locking broken on
// purpose); position anticorrelation is kept, phase correlation is not.
enum class PhaseModel { kSharedPair, kIndependent };

struct DoubleWState {
  int sector_count = 0;            // M, power of two >= 2
  Eigen::MatrixXcd joint_amplitudes;  // M x M, (upper, lower), unit Frobenius norm
  Eigen::VectorXd pair_phases;     // theta_k as drawn
  PhaseModel phase_model = PhaseModel::kSharedPair;
  std::uint64_t phase_seed = 0;
};

// (1/sqrt(M)) sum_k e^(i theta_k) |k, k>, theta_k seeded uniform in [0, 2pi).
// Each photon's marginal is maximally mixed over the M sectors.
DoubleWState make_double_w(int sector_count, std::uint64_t phase_seed);

// Control state: joint phase is the sum of two independent per-arm draws and
// no gauge relation ties it to the combiners.
DoubleWState make_double_w_independent(int sector_count, std::uint64_t phase_seed);

struct ApertureCombination {
  DoubleWState state;                 // amplitudes after the combiners
  Eigen::MatrixXd joint_distribution; // M x M click probabilities, sums to 1
};

// Runs `rounds` butterfly combining stages (stage s couples sector pairs
// differing in bit s) on both arms. rounds = log2(M) is the full combiner;
// rounds = 0 returns the state untouched. For kSharedPair the lower arm's
// input coupling removes the locked phase pattern (see PhaseModel).
ApertureCombination combine_apertures(const DoubleWState& state, int rounds);

// Probability mass on the index-aligned detector pairing (upper j with
// lower j), which is the antipodal geometric pairing the source feeds.
// 1 means every coincidence lands on the designated pairing; 1/M is chance.
double correlation_score(const Eigen::MatrixXd& joint_distribution);

}  // namespace istbench
