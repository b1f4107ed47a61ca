#include "istbench/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "istbench/errors.hpp"
#include "istbench/rng.hpp"
#include "istbench/tolerances.hpp"

namespace istbench {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_mode_count(int mode_count) {
  if (mode_count < 1) throw DimensionError("state needs at least one path mode");
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Unitarity check for apply_unitary. Exhaustive up to 256 modes; above that
// an O(n^3) gram matrix is slow enough to dominate honest workloads, so we
// verify u.adjoint() * (u * x) == x on a few deterministic random vectors.
void check_unitary(const Matrix& u, double tolerance) {
  const auto n = u.rows();
  if (u.cols() != n) throw DimensionError("unitary must be square");
  if (n <= 256) {
    const double defect = (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > tolerance)
      throw ValidationError("matrix is not unitary (defect " + std::to_string(defect) + ")");
    return;
  }
  Rng rng(0x5be5u);
  for (int probe = 0; probe < 3; ++probe) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(rng.gaussian(), rng.gaussian());
    x /= x.norm();
    const double defect = (u.adjoint() * (u * x) - x).cwiseAbs().maxCoeff();
    if (defect > tolerance)
      throw ValidationError("matrix is not unitary (probe defect " + std::to_string(defect) + ")");
  }
}

}  // namespace

PurePathState::PurePathState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) throw DimensionError("pure state needs mode count >= 1");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kPureIdentity)
    throw ValidationError("pure state is not normalized");
}

PurePathState PurePathState::basis(int mode_count, int mode) {
  check_mode_count(mode_count);
  if (mode < 0 || mode >= mode_count) throw DimensionError("basis mode out of range");
  Vector amps = Vector::Zero(mode_count + 1);
  amps(mode) = 1.0;
  return PurePathState(std::move(amps));
}

PurePathState PurePathState::vacuum(int mode_count) {
  check_mode_count(mode_count);
  Vector amps = Vector::Zero(mode_count + 1);
  amps(mode_count) = 1.0;
  return PurePathState(std::move(amps));
}

PurePathState PurePathState::w_state(int mode_count) {
  check_mode_count(mode_count);
  Vector amps = Vector::Zero(mode_count + 1);
  amps.head(mode_count).setConstant(1.0 / std::sqrt(static_cast<double>(mode_count)));
  return PurePathState(std::move(amps));
}

PurePathState PurePathState::walsh_w_state(int mode_count, int walsh_row) {
  check_mode_count(mode_count);
  if (!is_power_of_two(mode_count))
    throw DimensionError("sign-pattern state needs a power-of-two mode count");
  if (walsh_row < 0 || walsh_row >= mode_count)
    throw DimensionError("sign-pattern row out of range");
  const double scale = 1.0 / std::sqrt(static_cast<double>(mode_count));
  Vector amps = Vector::Zero(mode_count + 1);
  for (int k = 0; k < mode_count; ++k) {
    const int parity = std::popcount(static_cast<unsigned>(walsh_row & k)) & 1;
    amps(k) = parity ? -scale : scale;
  }
  return PurePathState(std::move(amps));
}

PhotonDensity::PhotonDensity(Matrix matrix) : matrix_(std::move(matrix)) {
  const auto dim = matrix_.rows();
  if (matrix_.cols() != dim || dim < 2)
    throw DimensionError("density matrix must be square with dimension >= 2");
  if (dim > kMaxDenseModes + 1)
    throw DimensionError("density matrix exceeds the dense-mode limit");
  if (hermiticity_defect(matrix_) > tol::kPureIdentity)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(matrix_.trace().real() - 1.0) > tol::kPureIdentity)
    throw ValidationError("density matrix trace is not 1");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  if (dim <= 65) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol::kChannel)
      throw ValidationError("density matrix has a negative eigenvalue");
  }
}

PhotonDensity::PhotonDensity(Matrix&& matrix, Evolved) : matrix_(std::move(matrix)) {
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  if (std::abs(matrix_.trace().real() - 1.0) > tol::kChannel)
    throw ValidationError("evolved density matrix trace drifted from 1");
}

PhotonDensity PhotonDensity::from_evolved(Matrix&& matrix) {
  const auto dim = matrix.rows();
  if (matrix.cols() != dim || dim < 2)
    throw DimensionError("density matrix must be square with dimension >= 2");
  return PhotonDensity(std::move(matrix), Evolved{});
}

double PhotonDensity::photon_trace() const {
  return matrix_.diagonal().head(mode_count()).real().sum();
}

double PhotonDensity::vacuum_population() const {
  return matrix_(mode_count(), mode_count()).real();
}

double PhotonDensity::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

PhotonDensity PhotonDensity::psd_clipped() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
  Eigen::VectorXd values = solver.eigenvalues();
  if (values.minCoeff() < -tol::kChannel)
    throw ValidationError("density matrix negativity exceeds the clipping tolerance");
  values = values.cwiseMax(0.0);
  const double total = values.sum();
  if (total <= 0.0) throw ValidationError("density matrix clipped to zero");
  values /= total;
  Matrix rebuilt =
      solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
  return from_evolved(std::move(rebuilt));
}

SpinDensity::SpinDensity(Eigen::Matrix4cd matrix) : matrix_(std::move(matrix)) {
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol::kPureIdentity)
    throw ValidationError("spin density is not Hermitian");
  if (std::abs(matrix_.trace().real() - 1.0) > tol::kPureIdentity)
    throw ValidationError("spin density trace is not 1");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::kChannel)
    throw ValidationError("spin density has a negative eigenvalue");
}

SpinDensity SpinDensity::from_pure(const Eigen::Vector4cd& amplitudes) {
  if (std::abs(amplitudes.squaredNorm() - 1.0) > tol::kPureIdentity)
    throw ValidationError("spin state is not normalized");
  return SpinDensity(amplitudes * amplitudes.adjoint());
}

PhotonDensity density_from_pure(const PurePathState& state) {
  Matrix m = state.amplitudes() * state.amplitudes().adjoint();
  return PhotonDensity::from_evolved(std::move(m));
}

PhotonDensity apply_unitary(const PhotonDensity& rho, const Matrix& photon_unitary) {
  const int modes = rho.mode_count();
  if (photon_unitary.rows() != modes || photon_unitary.cols() != modes)
    throw DimensionError("unitary dimension does not match the photon sector");
  check_unitary(photon_unitary, tol::kChannel);

  Matrix out = rho.matrix();
  out.topLeftCorner(modes, modes) =
      photon_unitary * rho.matrix().topLeftCorner(modes, modes) * photon_unitary.adjoint();
  out.topRightCorner(modes, 1) = photon_unitary * rho.matrix().topRightCorner(modes, 1);
  out.bottomLeftCorner(1, modes) = out.topRightCorner(modes, 1).adjoint();
  return PhotonDensity::from_evolved(std::move(out));
}

double purity(const PhotonDensity& rho) {
  // tr(rho^2) is the squared Frobenius norm for Hermitian rho.
  return std::clamp(rho.matrix().squaredNorm(), 0.0, 1.0);
}

double purity(const SpinDensity& rho) {
  return std::clamp(rho.matrix().squaredNorm(), 0.0, 1.0);
}

double fidelity_with_pure(const PhotonDensity& rho, const PurePathState& target) {
  if (target.amplitudes().size() != rho.dim())
    throw DimensionError("fidelity operands have different dimensions");
  // Two-stage evaluation (matvec, then dot) keeps the rounding error of the
  // M^2-term sum well under the 1e-10 contract even at 4096 modes.
  const Vector image = rho.matrix() * target.amplitudes();
  const double value = target.amplitudes().dot(image).real();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace istbench
