#include "istbench/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "istbench/errors.hpp"
#include "istbench/rng.hpp"
#include "istbench/tolerances.hpp"

namespace istbench {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_sectors(int sector_count) {
  if (!is_power_of_two(sector_count) || sector_count < 2)
    throw ValidationError("sector count must be a power of two >= 2");
}

int log2_exact(int n) {
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  return bits;
}

DoubleWState assemble(int sector_count, std::uint64_t phase_seed, PhaseModel model,
                      const Eigen::VectorXd& stored_phases, const Eigen::VectorXd& joint_phases) {
  DoubleWState state;
  state.sector_count = sector_count;
  state.pair_phases = stored_phases;
  state.phase_model = model;
  state.phase_seed = phase_seed;
  state.joint_amplitudes = Eigen::MatrixXcd::Zero(sector_count, sector_count);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sector_count));
  for (int k = 0; k < sector_count; ++k)
    state.joint_amplitudes(k, k) = std::polar(scale, joint_phases(k));
  return state;
}

}  // namespace

DoubleWState make_double_w(int sector_count, std::uint64_t phase_seed) {
  check_sectors(sector_count);
  Rng rng = Rng::for_stream(phase_seed, 0);
  Eigen::VectorXd phases(sector_count);
  for (int k = 0; k < sector_count; ++k) phases(k) = rng.angle();
  return assemble(sector_count, phase_seed, PhaseModel::kSharedPair, phases, phases);
}

DoubleWState make_double_w_independent(int sector_count, std::uint64_t phase_seed) {
  check_sectors(sector_count);
  Rng upper = Rng::for_stream(phase_seed, 1);
  Rng lower = Rng::for_stream(phase_seed, 2);
  Eigen::VectorXd joint(sector_count);
  Eigen::VectorXd upper_phases(sector_count);
  for (int k = 0; k < sector_count; ++k) {
    upper_phases(k) = upper.angle();
    joint(k) = upper_phases(k) + lower.angle();
  }
  return assemble(sector_count, phase_seed, PhaseModel::kIndependent, upper_phases, joint);
}

ApertureCombination combine_apertures(const DoubleWState& state, int rounds) {
  check_sectors(state.sector_count);
  const int full = log2_exact(state.sector_count);
  if (rounds < 0 || rounds > full)
    throw ValidationError("combining rounds must lie in [0, log2(sectors)]");
  if (state.joint_amplitudes.rows() != state.sector_count ||
      state.joint_amplitudes.cols() != state.sector_count)
    throw DimensionError("joint amplitude matrix does not match the sector count");
  if (std::abs(state.joint_amplitudes.squaredNorm() - 1.0) > tol::kPureIdentity)
    throw ValidationError("joint state is not normalized");

  Eigen::MatrixXcd joint = state.joint_amplitudes;

  if (rounds > 0 && state.phase_model == PhaseModel::kSharedPair) {
    // The stored amplitudes are written in the upper arm's source-locked
    // gauge; the mirror-oriented lower combiner couples in with the opposite
    // phase sign, which cancels the locked pattern here.
    for (int k = 0; k < state.sector_count; ++k)
      joint.col(k) *= std::polar(1.0, -state.pair_phases(k));
  }

  for (int bit = 0; bit < rounds; ++bit) {
    const int step = 1 << bit;
    for (int a = 0; a < state.sector_count; ++a) {
      if (a & step) continue;
      const int b = a | step;
      const Eigen::RowVectorXcd row_a = joint.row(a);
      const Eigen::RowVectorXcd row_b = joint.row(b);
      joint.row(a) = kInvSqrt2 * (row_a + row_b);
      joint.row(b) = kInvSqrt2 * (row_a - row_b);
      const Eigen::VectorXcd col_a = joint.col(a);
      const Eigen::VectorXcd col_b = joint.col(b);
      joint.col(a) = kInvSqrt2 * (col_a + col_b);
      joint.col(b) = kInvSqrt2 * (col_a - col_b);
    }
  }

  ApertureCombination result;
  result.state = state;
  result.state.joint_amplitudes = std::move(joint);
  result.joint_distribution = result.state.joint_amplitudes.cwiseAbs2();
  return result;
}

double correlation_score(const Eigen::MatrixXd& joint_distribution) {
  if (joint_distribution.rows() != joint_distribution.cols() || joint_distribution.rows() < 1)
    throw DimensionError("joint distribution must be square");
  if (joint_distribution.minCoeff() < -tol::kPureIdentity)
    throw ValidationError("joint distribution has a negative probability");
  if (std::abs(joint_distribution.sum() - 1.0) > tol::kChannel)
    throw ValidationError("joint distribution does not sum to 1");
  return std::clamp(joint_distribution.diagonal().sum(), 0.0, 1.0);
}

}  // namespace istbench
