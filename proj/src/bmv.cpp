#include "istbench/bmv.hpp"

#include <algorithm>
#include <cmath>

#include "istbench/errors.hpp"
#include "istbench/rng.hpp"

namespace istbench {
namespace {

Eigen::Matrix2cd pauli(PauliAxis axis) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (axis) {
    case PauliAxis::kX:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::kY:
      m << 0, -i, i, 0;
      break;
    case PauliAxis::kZ:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

// Cell probabilities for outcomes (s1, s2) in {+1, -1}^2:
// p = (1 + s1 <A x I> + s2 <I x B> + s1 s2 <A x B>) / 4.
Eigen::Vector4d correlator_cells(const SpinDensity& rho, PauliAxis first, PauliAxis second) {
  const Eigen::Matrix2cd a = pauli(first);
  const Eigen::Matrix2cd b = pauli(second);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const double ea = (kron2(a, id) * rho.matrix()).trace().real();
  const double eb = (kron2(id, b) * rho.matrix()).trace().real();
  const double eab = (kron2(a, b) * rho.matrix()).trace().real();
  Eigen::Vector4d cells;  // (+,+), (+,-), (-,+), (-,-)
  cells << 1 + ea + eb + eab, 1 + ea - eb - eab, 1 - ea + eb - eab, 1 - ea - eb + eab;
  cells *= 0.25;
  // Roundoff guard; cells are probabilities by construction.
  cells = cells.cwiseMax(0.0);
  cells /= cells.sum();
  return cells;
}

namespace {

struct CorrelatorSample {
  double estimate = 0.0;
  double stderr_value = 0.0;
};

CorrelatorSample sample_correlator(const SpinDensity& rho, PauliAxis first, PauliAxis second,
                                   std::int64_t runs, Rng& rng) {
  const Eigen::Vector4d cells = correlator_cells(rho, first, second);
  const auto counts = sample_multinomial(rng, runs, cells);
  const double agree = static_cast<double>(counts[0] + counts[3]);
  const double disagree = static_cast<double>(counts[1] + counts[2]);
  CorrelatorSample out;
  out.estimate = (agree - disagree) / static_cast<double>(runs);
  out.stderr_value =
      std::sqrt(std::max(1.0 - out.estimate * out.estimate, 0.0) / static_cast<double>(runs));
  return out;
}

}  // namespace

void BmvParams::validate() const {
  if (!(mass1_kg > 0.0) || !(mass2_kg > 0.0)) throw ValidationError("masses must be positive");
  if (!(separation_m > 0.0)) throw ValidationError("separation must be positive");
  if (!(arm_offset_m >= 0.0)) throw ValidationError("arm offset must be nonnegative");
  if (!(arm_offset_m < separation_m))
    throw ValidationError("arm offset must be smaller than the separation");
  if (!(tau_s >= 0.0)) throw ValidationError("interaction time must be nonnegative");
  if (!(gravitational_constant > 0.0) || !(hbar > 0.0))
    throw ValidationError("physical constants must be positive");
}

BmvPhases bmv_phases(const BmvParams& params) {
  params.validate();
  const double coupling =
      params.gravitational_constant * params.mass1_kg * params.mass2_kg * params.tau_s /
      params.hbar;
  BmvPhases phases;
  phases.phi = coupling / params.separation_m;
  phases.phi_lr = coupling / (params.separation_m + params.arm_offset_m);
  phases.phi_rl = coupling / (params.separation_m - params.arm_offset_m);
  phases.delta_phi_lr = phases.phi_lr - phases.phi;
  phases.delta_phi_rl = phases.phi_rl - phases.phi;
  return phases;
}

SpinDensity evolve_bmv(const BmvParams& params, GravityHypothesis hypothesis) {
  const BmvPhases phases = bmv_phases(params);
  switch (hypothesis) {
    case GravityHypothesis::kCoherent: {
      Eigen::Vector4cd amplitudes;
      amplitudes << 1.0, std::polar(1.0, phases.delta_phi_lr),
          std::polar(1.0, phases.delta_phi_rl), 1.0;
      amplitudes *= 0.5;
      return SpinDensity::from_pure(amplitudes);
    }
    case GravityHypothesis::kDecoherentNoCollapse: {
      // Phase records decohere before readout: the arm populations stay
      // balanced but every pairwise coherence is stripped of the
      // gravitational phase, leaving the bare split state's coherences.
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Constant(0.25);
      return SpinDensity(m);
    }
    case GravityHypothesis::kDecoherentCollapse:
      return SpinDensity(Eigen::Matrix4cd::Identity() * 0.25);
  }
  throw ValidationError("unknown hypothesis");
}

double pauli_correlator(const SpinDensity& rho, PauliAxis first, PauliAxis second) {
  const double value = (kron2(pauli(first), pauli(second)) * rho.matrix()).trace().real();
  return std::clamp(value, -1.0, 1.0);
}

double entanglement_witness(const SpinDensity& rho) {
  return std::abs(pauli_correlator(rho, PauliAxis::kX, PauliAxis::kZ) -
                  pauli_correlator(rho, PauliAxis::kY, PauliAxis::kZ));
}

WitnessEstimate sample_witness(const SpinDensity& rho, std::int64_t runs_per_setting,
                               std::uint64_t seed) {
  if (runs_per_setting < 1) throw ValidationError("runs_per_setting must be >= 1");
  Rng rng_xz = Rng::for_stream(seed, 0);
  Rng rng_yz = Rng::for_stream(seed, 1);
  const CorrelatorSample xz =
      sample_correlator(rho, PauliAxis::kX, PauliAxis::kZ, runs_per_setting, rng_xz);
  const CorrelatorSample yz =
      sample_correlator(rho, PauliAxis::kY, PauliAxis::kZ, runs_per_setting, rng_yz);
  WitnessEstimate estimate;
  estimate.witness = std::abs(xz.estimate - yz.estimate);
  estimate.witness_stderr = std::hypot(xz.stderr_value, yz.stderr_value);
  estimate.corr_xz = xz.estimate;
  estimate.corr_xz_stderr = xz.stderr_value;
  estimate.corr_yz = yz.estimate;
  estimate.corr_yz_stderr = yz.stderr_value;
  estimate.runs_per_setting = runs_per_setting;
  return estimate;
}

}  // namespace istbench
