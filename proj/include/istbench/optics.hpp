#pragma once

#include <optional>
#include <string>
#include <vector>

#include "istbench/ist.hpp"
#include "istbench/states.hpp"

namespace istbench {

// Two-mode coupling conventions. kRealHadamard sends (a, b) to
// ((a + b)/sqrt(2), (a - b)/sqrt(2)) at reflectivity 1/2 and is the network
// default; kSymmetricPhase is the beamsplitter with i on the cross terms.
enum class BeamsplitterConvention { kRealHadamard, kSymmetricPhase };

struct BeamsplitterElement {
  int mode_a = 0;
  int mode_b = 0;
  double reflectivity = 0.5;
  BeamsplitterConvention convention = BeamsplitterConvention::kRealHadamard;

  Eigen::Matrix2cd coupling() const;  // the 2 x 2 unitary on (mode_a, mode_b)
};

// Elements are applied in order; after each element, amplitude damping with
// probability `loss_per_element` acts on both of its output modes.
struct OpticalNetwork {
  int mode_count = 0;
  double loss_per_element = 0.0;
  std::vector<BeamsplitterElement> elements;

  void validate() const;
};

std::string network_to_json(const OpticalNetwork& network);
OpticalNetwork network_from_json(const std::string& text);

inline constexpr int kMaxCascadeIterations = 24;

// Balanced splitter cascade turning one photon in mode 0 into the uniform
// superposition over 2^iterations modes: stage s splits every occupied mode
// m into (m, m + 2^(iterations - s)). 2^iterations - 1 elements; every
// photon path crosses exactly `iterations` of them.
OpticalNetwork build_w_network(int iterations);

// Butterfly recombiner realizing the M = 2^iterations sign-pattern transform
// (certification_transform below) out of two-mode elements: stage s couples
// every mode pair differing in bit s. iterations * 2^(iterations - 1)
// elements; every photon path crosses exactly `iterations` of them.
OpticalNetwork build_certification_network(int iterations);

// Exact pure-sector propagation. A single photon through beamsplitters and
// per-element damping stays pure in the photon sector; loss only moves
// population to the vacuum diagonal. This holds to any mode count and is the
// fast path past the dense-matrix limit.
struct PurePathTrace {
  Vector photon_amplitudes;  // M entries, photon sector only
  double vacuum_population = 0.0;
};

PurePathTrace propagate_pure(const OpticalNetwork& network, int input_mode);

// Dense density-matrix walk, element by element, for mode_count up to
// PhotonDensity::kMaxDenseModes. If `ist` is given, the model's decoherence
// acts once on the output (width = mode_count).
PhotonDensity run_network(const OpticalNetwork& network, int input_mode,
                          const std::optional<IstParams>& ist = std::nullopt);

// Same element walk applied to an existing state.
PhotonDensity apply_network(const OpticalNetwork& network, const PhotonDensity& rho);

// Channel placed at the mirror of a there-and-back interferometer test.
struct MidpointChannel {
  enum class Kind { kIdentity, kFullDephase, kIstDecoherence };

  Kind kind = Kind::kIdentity;
  std::optional<IstParams> ist;

  static MidpointChannel identity() { return {Kind::kIdentity, std::nullopt}; }
  static MidpointChannel full_dephase() { return {Kind::kFullDephase, std::nullopt}; }
  static MidpointChannel ist_decoherence(const IstParams& params) {
    return {Kind::kIstDecoherence, params};
  }
};

// Probability that a photon sent through the network, bounced off a mirror
// (with `channel` acting at the mirror), and run back through the inverse
// network returns to its input mode:
//
//   <in| U* L[U |in><in| U*] U |in>
//
// For the diagonal channels above this reduces exactly to
// g * |<in|U*U|in>|^2 + (1 - g) * sum_k |(U|in>)_k|^4 with g the channel's
// coherence retention, which is how it is computed; both factors come from
// honest forward and reverse amplitude propagation, so the identity channel
// reproduces 1 only to the accuracy the element chain actually achieves.
// Element loss is not part of this figure; it interrogates the unitary part.
double return_probability(const OpticalNetwork& network, int input_mode,
                          const MidpointChannel& channel);

inline constexpr int kMaxTransformModes = 1024;

// Dense M x M sign-pattern transform, entries (-1)^popcount(j & k)/sqrt(M).
// Row j is the detection pattern that fires detector j with certainty when
// fed walsh_w_state(M, j). M must be a power of two <= kMaxTransformModes;
// use build_certification_network for larger M.
Matrix certification_transform(int mode_count);

// Detector click distribution after applying `transform` to the photon
// sector: M entries followed by the no-click probability. Entries are
// clamped at zero (tiny negative diagonals from roundoff) and must sum to 1
// within 1e-10.
Eigen::VectorXd detector_distribution(const PhotonDensity& rho, const Matrix& transform);

// Click distribution in the bare path basis (transform = identity).
Eigen::VectorXd click_distribution(const PhotonDensity& rho);

}  // namespace istbench
