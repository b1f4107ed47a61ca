#pragma once

// Shared helpers for the test suites. The "naive" routines below are
// deliberately independent of the library's evolution code paths: they build
// full-dimensional operator matrices and apply textbook formulas, trading
// speed for obviousness, and serve as oracles for the optimized paths.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "istbench/optics.hpp"
#include "istbench/rng.hpp"
#include "istbench/states.hpp"

namespace istbench::test {

// Haar-ish random unitary from the QR decomposition of a complex Gaussian
// matrix, with the R diagonal phase fixed so the result is deterministic.
inline Matrix random_unitary(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

// Random mixed state on M modes plus vacuum: a few random pure states with
// random weights, plus a bit of vacuum population.
inline Matrix random_density_matrix(int mode_count, Rng& rng, int terms = 3) {
  const int dim = mode_count + 1;
  Matrix rho = Matrix::Zero(dim, dim);
  double total = 0.0;
  std::vector<double> weights;
  for (int t = 0; t < terms; ++t) {
    weights.push_back(rng.uniform(0.1, 1.0));
    total += weights.back();
  }
  for (int t = 0; t < terms; ++t) {
    Vector psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = Complex(rng.gaussian(), rng.gaussian());
    psi /= psi.norm();
    rho += (weights[t] / total) * (psi * psi.adjoint());
  }
  return rho;
}

// Full (M+1)-dimensional matrix of one beamsplitter element.
inline Matrix element_matrix(const BeamsplitterElement& element, int dim) {
  Matrix u = Matrix::Identity(dim, dim);
  const Eigen::Matrix2cd b = element.coupling();
  u(element.mode_a, element.mode_a) = b(0, 0);
  u(element.mode_a, element.mode_b) = b(0, 1);
  u(element.mode_b, element.mode_a) = b(1, 0);
  u(element.mode_b, element.mode_b) = b(1, 1);
  return u;
}

// Textbook Kraus application of amplitude damping on one mode.
inline Matrix naive_loss(const Matrix& rho, int mode, double p, int vacuum) {
  const int dim = static_cast<int>(rho.rows());
  Matrix k0 = Matrix::Identity(dim, dim);
  k0(mode, mode) = std::sqrt(1.0 - p);
  Matrix k1 = Matrix::Zero(dim, dim);
  k1(vacuum, mode) = std::sqrt(p);
  return k0 * rho * k0.adjoint() + k1 * rho * k1.adjoint();
}

// Element-by-element network walk through full matrix products.
inline Matrix naive_run_network(const OpticalNetwork& network, int input_mode) {
  const int dim = network.mode_count + 1;
  Matrix rho = Matrix::Zero(dim, dim);
  rho(input_mode, input_mode) = 1.0;
  for (const auto& element : network.elements) {
    const Matrix u = element_matrix(element, dim);
    rho = u * rho * u.adjoint();
    if (network.loss_per_element > 0.0) {
      rho = naive_loss(rho, element.mode_a, network.loss_per_element, network.mode_count);
      rho = naive_loss(rho, element.mode_b, network.loss_per_element, network.mode_count);
    }
  }
  return rho;
}

// Photon-sector unitary of a lossless network, assembled column by column.
inline Matrix naive_network_unitary(const OpticalNetwork& network) {
  Matrix u = Matrix::Identity(network.mode_count, network.mode_count);
  for (const auto& element : network.elements) {
    const Eigen::Matrix2cd b = element.coupling();
    const Eigen::RowVectorXcd row_a = u.row(element.mode_a);
    const Eigen::RowVectorXcd row_b = u.row(element.mode_b);
    u.row(element.mode_a) = b(0, 0) * row_a + b(0, 1) * row_b;
    u.row(element.mode_b) = b(1, 0) * row_a + b(1, 1) * row_b;
  }
  return u;
}

// The mirror return figure evaluated literally: rho_mid is the channel
// output for input U |in><in| U*, and the overlap after the return pass is
// <in| U* rho_mid U |in> = psi* rho_mid psi with psi = U |in>.
inline double naive_return_probability(const OpticalNetwork& network, int input_mode,
                                       double coherence_retention) {
  OpticalNetwork lossless = network;
  lossless.loss_per_element = 0.0;
  const Matrix u = naive_network_unitary(lossless);
  Vector in = Vector::Zero(network.mode_count);
  in(input_mode) = 1.0;
  const Vector psi = u * in;
  const Matrix rho = psi * psi.adjoint();
  Matrix dephased = coherence_retention * rho;
  dephased.diagonal() = rho.diagonal();
  return psi.dot(dephased * psi).real();
}

}  // namespace istbench::test
