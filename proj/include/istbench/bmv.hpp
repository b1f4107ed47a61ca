#pragma once

#include <cstdint>

#include "istbench/states.hpp"

namespace istbench {

// Two-mass interferometer test of gravitationally induced entanglement.
// Each mass is a spin-tagged matter-wave split into left/right arms; the
// four arm pairings accumulate gravitational phases for a time tau.
struct BmvParams {
  double mass1_kg = 1e-11;
  double mass2_kg = 1e-11;
  double separation_m = 200e-6;   // center-to-center distance d
  double arm_offset_m = 100e-6;   // Delta x, arm separation; must be < d
  double tau_s = 1.7855e-5;       // interaction time
  double gravitational_constant = 6.67430e-11;
  double hbar = 1.054571817e-34;

  void validate() const;
};

// Phases in radians: phi for the baseline pairing at distance d, phi_lr and
// phi_rl for the near/far pairings at d + Delta x and d - Delta x, and the
// differences delta_* = phi_* - phi that the witness depends on.
struct BmvPhases {
  double phi = 0.0;
  double phi_lr = 0.0;       // masses farther apart: d + Delta x
  double phi_rl = 0.0;       // masses closer together: d - Delta x
  double delta_phi_lr = 0.0; // negative
  double delta_phi_rl = 0.0; // positive
};

BmvPhases bmv_phases(const BmvParams& params);

// kCoherent          gravity entangles the superposed arms (quantum channel)
// kDecoherentNoCollapse  phases decohere, interferometers still read out x
// kDecoherentCollapse    superpositions collapse; maximally mixed outcome
enum class GravityHypothesis { kCoherent, kDecoherentNoCollapse, kDecoherentCollapse };

// Final two-qubit spin state after the arms recombine. Coherent:
// (|uu> + e^(i a)|ud> + e^(i b)|du> + |dd>)/2 with a = delta_phi_lr and
// b = delta_phi_rl. The decoherent hypotheses drop the off-diagonal phase
// information in the corresponding way.
SpinDensity evolve_bmv(const BmvParams& params, GravityHypothesis hypothesis);

enum class PauliAxis { kX, kY, kZ };

double pauli_correlator(const SpinDensity& rho, PauliAxis first, PauliAxis second);

// Outcome probabilities of a joint projective measurement of the two Pauli
// operators, ordered (+,+), (+,-), (-,+), (-,-).
Eigen::Vector4d correlator_cells(const SpinDensity& rho, PauliAxis first, PauliAxis second);

// |<sx sz> - <sy sz>|. Values above 1 certify entanglement within this
// experiment's hypothesis family (every member is diagonal-plus-uniform-
// coherence in the arm basis); it is not a universal separable bound, which
// for arbitrary product states reaches sqrt(2).
double entanglement_witness(const SpinDensity& rho);

struct WitnessEstimate {
  double witness = 0.0;
  double witness_stderr = 0.0;
  double corr_xz = 0.0;
  double corr_xz_stderr = 0.0;
  double corr_yz = 0.0;
  double corr_yz_stderr = 0.0;
  std::int64_t runs_per_setting = 0;
};

// Finite-statistics witness: `runs_per_setting` projective measurements of
// each of the two correlators, multinomial over the four outcome cells.
WitnessEstimate sample_witness(const SpinDensity& rho, std::int64_t runs_per_setting,
                               std::uint64_t seed);

}  // namespace istbench
