#pragma once

#include <cstdint>

#include "istbench/states.hpp"

namespace istbench {

// Finite-state model parameters. The model bounds the information content of
// the universe's state space by N = 2^log2_N; log2_N is stored directly so
// that N around 10^301 (log2_N ~ 1000) stays exactly representable.
//
// Decoherence of superpositions wider than the budget comes in two flavors:
//   kHardCutoff  off-diagonal coherences vanish entirely
//   kPartial     coherences shrink by gamma per unsupported doubling
enum class DecoherenceModel { kHardCutoff, kPartial };

struct IstParams {
  double log2_N = 0.0;
  DecoherenceModel model = DecoherenceModel::kHardCutoff;
  double gamma = 0.0;  // retention per unsupported doubling, only for kPartial

  static IstParams hard_cutoff(double log2_n);
  static IstParams partial(double log2_n, double gamma);

  void validate() const;  // log2_N > 0; gamma in [0, 1] when kPartial
};

// Largest number of qubits the state space can hold entangled: floor(log2_N).
int max_entangled_qubits(const IstParams& params);

// Largest splitter-cascade depth the model supports coherently:
// floor(log2(log2_N)). Requires log2_N >= 1.
int max_iterations(const IstParams& params);

// Inverse of max_entangled_qubits: the smallest log2_N supporting `qubits`.
double min_log2_n_for_qubits(std::int64_t qubits);

// Probability that the photon survives an M-mode cascade with per-element
// loss `loss_per_element`, i.e. (1 - p)^log2(M); every path crosses log2(M)
// elements. `certify` doubles the depth (generation plus recombination).
// M must be a power of two >= 1.
double survival_probability(double loss_per_element, std::int64_t modes, bool certify);

// Off-diagonal retention factor applied to a superposition spread over
// `entangled_width` modes: 1 if the width fits the budget, otherwise 0
// (hard cutoff) or gamma^(log2(width) - max_iterations) (partial).
double coherence_retention(const IstParams& params, int entangled_width);

// Applies the model's decoherence channel to `rho`, treating its photon
// superposition as `entangled_width` modes wide (pass rho.mode_count() for a
// state spread over the full network). All off-diagonals are scaled by
// coherence_retention, which keeps the map completely positive.
PhotonDensity ist_decoherence(const PhotonDensity& rho, const IstParams& params,
                              int entangled_width);

// Bloch angles snapped to the model's 2*pi/N grid. Above log2_N = 52 the
// grid spacing falls below double precision, so the angles pass through
// unchanged and `snapped` reports false.
struct SnappedAngles {
  double theta = 0.0;
  double phi = 0.0;
  bool snapped = false;
};

SnappedAngles discretize_bloch(double theta, double phi, const IstParams& params);

}  // namespace istbench
