#include <cmath>
#include <complex>

#include <doctest.h>

#include "istbench/errors.hpp"
#include "istbench/rng.hpp"
#include "istbench/states.hpp"
#include "istbench/tolerances.hpp"
#include "support.hpp"

using namespace istbench;

TEST_SUITE_BEGIN("states");

TEST_CASE("basis, vacuum, and uniform states are normalized and shaped") {
  const auto b = PurePathState::basis(4, 2);
  CHECK(b.mode_count() == 4);
  CHECK(b.amplitude(2) == Complex(1.0, 0.0));
  CHECK(b.amplitude(4) == Complex(0.0, 0.0));

  const auto v = PurePathState::vacuum(4);
  CHECK(v.amplitude(4) == Complex(1.0, 0.0));

  const auto w = PurePathState::w_state(8);
  for (int k = 0; k < 8; ++k)
    CHECK(std::abs(w.amplitude(k) - 1.0 / std::sqrt(8.0)) < tol::kPureIdentity);
  CHECK(std::abs(w.amplitudes().squaredNorm() - 1.0) < tol::kPureIdentity);
}

TEST_CASE("pure state construction rejects bad input") {
  CHECK_THROWS_AS(PurePathState(Vector::Ones(3)), ValidationError);
  CHECK_THROWS_AS(PurePathState(Vector::Zero(1)), DimensionError);
  CHECK_THROWS_AS(PurePathState::basis(4, 4), DimensionError);
  CHECK_THROWS_AS(PurePathState::basis(4, -1), DimensionError);
  CHECK_THROWS_AS(PurePathState::w_state(0), DimensionError);
}

TEST_CASE("sign-pattern states reproduce the parity rule and are orthonormal") {
  const auto row0 = PurePathState::walsh_w_state(4, 0);
  const auto plain = PurePathState::w_state(4);
  CHECK((row0.amplitudes() - plain.amplitudes()).cwiseAbs().maxCoeff() <
        tol::kPureIdentity);

  const auto row1 = PurePathState::walsh_w_state(4, 1);
  CHECK(std::abs(row1.amplitude(0) - 0.5) < tol::kPureIdentity);
  CHECK(std::abs(row1.amplitude(1) + 0.5) < tol::kPureIdentity);
  CHECK(std::abs(row1.amplitude(2) - 0.5) < tol::kPureIdentity);
  CHECK(std::abs(row1.amplitude(3) + 0.5) < tol::kPureIdentity);

  for (int r = 0; r < 16; ++r)
    for (int s = 0; s < 16; ++s) {
      const auto a = PurePathState::walsh_w_state(16, r);
      const auto b = PurePathState::walsh_w_state(16, s);
      const double overlap = std::abs(a.amplitudes().dot(b.amplitudes()));
      CHECK(std::abs(overlap - (r == s ? 1.0 : 0.0)) < tol::kPureIdentity);
    }

  CHECK_THROWS_AS(PurePathState::walsh_w_state(6, 0), DimensionError);
  CHECK_THROWS_AS(PurePathState::walsh_w_state(8, 8), DimensionError);
}

TEST_CASE("density from a pure state is a unit-trace rank-one projector") {
  const auto rho = density_from_pure(PurePathState::w_state(8));
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) < tol::kPureIdentity);
  CHECK(std::abs(purity(rho) - 1.0) < tol::kPureIdentity);
  CHECK(std::abs(fidelity_with_pure(rho, PurePathState::w_state(8)) - 1.0) <
        tol::kPureIdentity);
  CHECK(rho.photon_trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.vacuum_population() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("density construction validates hermiticity, trace, and spectrum") {
  Matrix bad = Matrix::Zero(3, 3);
  bad(0, 0) = 1.0;
  bad(0, 1) = Complex(0.5, 0.0);  // not mirrored
  CHECK_THROWS_AS(PhotonDensity{bad}, ValidationError);

  Matrix off_trace = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(PhotonDensity{off_trace}, ValidationError);

  Matrix negative = Matrix::Zero(3, 3);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(PhotonDensity{negative}, ValidationError);

  CHECK_THROWS_AS(PhotonDensity(Matrix::Ones(1, 1)), DimensionError);
}

TEST_CASE("psd clipping repairs tiny negativity and rejects real negativity") {
  Matrix nearly = Matrix::Zero(3, 3);
  nearly(0, 0) = 1.0 + 5e-11;
  nearly(1, 1) = -5e-11;
  const auto repaired = PhotonDensity::from_evolved(std::move(nearly)).psd_clipped();
  CHECK(repaired.min_eigenvalue() >= -tol::kPureIdentity);
  CHECK(std::abs(repaired.matrix().trace().real() - 1.0) < tol::kPureIdentity);

  Matrix broken = Matrix::Zero(3, 3);
  broken(0, 0) = 1.5;
  broken(1, 1) = -0.5;
  CHECK_THROWS_AS(PhotonDensity::from_evolved(std::move(broken)).psd_clipped(),
                  ValidationError);
}

TEST_CASE("unitary application moves the photon and leaves the vacuum alone") {
  Vector amps = Vector::Zero(3);
  amps(0) = 0.6;
  amps(2) = 0.8;  // vacuum amplitude
  const auto rho = density_from_pure(PurePathState(amps));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto moved = apply_unitary(rho, swap);
  CHECK(std::abs(moved.matrix()(1, 1).real() - 0.36) < tol::kPureIdentity);
  CHECK(std::abs(moved.matrix()(0, 0).real() - 0.0) < tol::kPureIdentity);
  CHECK(std::abs(moved.vacuum_population() - 0.64) < tol::kPureIdentity);
  CHECK(std::abs(purity(moved) - 1.0) < tol::kPureIdentity);
}

TEST_CASE("unitary application rejects wrong shapes and non-unitaries") {
  const auto rho = density_from_pure(PurePathState::w_state(4));
  CHECK_THROWS_AS(apply_unitary(rho, Matrix::Identity(3, 3)), DimensionError);
  CHECK_THROWS_AS(apply_unitary(rho, 1.1 * Matrix::Identity(4, 4)), ValidationError);
}

TEST_CASE("random unitaries preserve trace, purity, and hermiticity") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = test::random_density_matrix(8, rng);
    m /= m.trace().real();
    const auto rho = PhotonDensity(m);
    const Matrix u = test::random_unitary(8, rng);
    const auto evolved = apply_unitary(rho, u);
    CHECK(std::abs(evolved.matrix().trace().real() - 1.0) < tol::kChannel);
    CHECK(std::abs(purity(evolved) - purity(rho)) < tol::kChannel);
    CHECK((evolved.matrix() - evolved.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(evolved.min_eigenvalue() > -tol::kChannel);
  }
}

TEST_CASE("fidelity of a mixture interpolates its components") {
  // 0.7 |W><W| + 0.3 |0><0| against |W>: 0.7 + 0.3 * (1/4).
  const auto w = PurePathState::w_state(4);
  const Matrix mix = 0.7 * density_from_pure(w).matrix() +
                     0.3 * density_from_pure(PurePathState::basis(4, 0)).matrix();
  const auto rho = PhotonDensity(mix);
  CHECK(std::abs(fidelity_with_pure(rho, w) - 0.775) < tol::kPureIdentity);
  CHECK_THROWS_AS(fidelity_with_pure(rho, PurePathState::w_state(8)), DimensionError);
}

TEST_CASE("purity of the uniform photon mixture is 1/M") {
  Matrix m = Matrix::Zero(5, 5);
  for (int i = 0; i < 4; ++i) m(i, i) = 0.25;
  CHECK(std::abs(purity(PhotonDensity(m)) - 0.25) < tol::kPureIdentity);
}

TEST_CASE("spin densities validate and support pure construction") {
  Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const auto rho = SpinDensity::from_pure(bell);
  CHECK(std::abs(purity(rho) - 1.0) < tol::kPureIdentity);

  Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(SpinDensity{negative}, ValidationError);

  Eigen::Vector4cd unnormalized = Eigen::Vector4cd::Ones();
  CHECK_THROWS_AS(SpinDensity::from_pure(unnormalized), ValidationError);
}

TEST_SUITE_END();
