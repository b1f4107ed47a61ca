#pragma once

#include <complex>

#include <Eigen/Dense>

namespace istbench {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// States live in the single-excitation sector of M path modes plus an
// explicit loss/vacuum mode. Amplitude index i < M is "one photon in path
// mode i"; index M is "no photon" (the photon was absorbed or never
// arrived). Keeping the vacuum mode explicit makes every loss channel
// trace-preserving and lets detector distributions carry a no-click entry.

class PurePathState {
 public:
  // `amplitudes` has M+1 entries (last one is the vacuum amplitude) and must
  // be normalized to 1 within 1e-12.
  explicit PurePathState(Vector amplitudes);

  static PurePathState basis(int mode_count, int mode);
  static PurePathState vacuum(int mode_count);

  // Uniform single-photon superposition over all M modes, all phases +1.
  static PurePathState w_state(int mode_count);

  // Sign-pattern variant: amplitude at mode k is (-1)^popcount(row & k)/sqrt(M).
  // Row 0 reproduces w_state. mode_count must be a power of two.
  static PurePathState walsh_w_state(int mode_count, int walsh_row);

  int mode_count() const { return static_cast<int>(amplitudes_.size()) - 1; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i) const { return amplitudes_(i); }

 private:
  Vector amplitudes_;
};

// Dense (M+1) x (M+1) density matrix. Construction validates Hermiticity
// within 1e-12 and unit trace within 1e-12; for dimensions up to 65 the
// spectrum is also checked (eigenvalues >= -1e-10). Instances are immutable;
// evolution functions return new values.
class PhotonDensity {
 public:
  static constexpr int kMaxDenseModes = 4096;

  explicit PhotonDensity(Matrix matrix);

  // For matrices produced by the library's own evolution routines:
  // symmetrizes (exact Hermiticity) and checks the trace, skipping the
  // O(d^3) spectrum check that public construction performs on small inputs.
  static PhotonDensity from_evolved(Matrix&& matrix);

  int mode_count() const { return static_cast<int>(matrix_.rows()) - 1; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  double photon_trace() const;       // probability the photon is still present
  double vacuum_population() const;  // diagonal entry of the loss mode

  double min_eigenvalue() const;  // O(d^3); intended for checks on small states

  // Clips eigenvalues in [-1e-10, 0) to zero and renormalizes the trace.
  // Negativity below -1e-10 is a ValidationError.
  PhotonDensity psd_clipped() const;

 private:
  struct Evolved {};
  PhotonDensity(Matrix&& matrix, Evolved);

  Matrix matrix_;
};

// Two-qubit (4 x 4) density matrix in the basis {uu, ud, du, dd}. Validation
// as for PhotonDensity; the spectrum check always runs.
class SpinDensity {
 public:
  explicit SpinDensity(Eigen::Matrix4cd matrix);
  static SpinDensity from_pure(const Eigen::Vector4cd& amplitudes);

  const Eigen::Matrix4cd& matrix() const { return matrix_; }

 private:
  Eigen::Matrix4cd matrix_;
};

PhotonDensity density_from_pure(const PurePathState& state);

// Conjugates the photon sector by `photon_unitary` (M x M); the vacuum mode
// is untouched. Unitarity is verified within 1e-10 (exhaustively for M <= 256,
// by deterministic random probes above that).
PhotonDensity apply_unitary(const PhotonDensity& rho, const Matrix& photon_unitary);

double purity(const PhotonDensity& rho);  // tr(rho^2), real, in (0, 1]
double purity(const SpinDensity& rho);

// <target| rho |target>, clamped to [0, 1].
double fidelity_with_pure(const PhotonDensity& rho, const PurePathState& target);

}  // namespace istbench
